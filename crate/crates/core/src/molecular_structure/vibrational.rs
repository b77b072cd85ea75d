use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};
use crate::special_math::HalfInteger;
use crate::units::RubidiumIsotope;

use super::{ElectronicCurve, ElectronicLabel, StructureError};

const CONVERGENCE_LIMIT: f64 = 1e-8;
const SUPPORT_THRESHOLD: f64 = 1e-16;
const SUPPORT_PADDING: usize = 20;

/// Uniform radial grid `start + i·step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid<T> {
    pub start: T,
    pub step: T,
    pub len: usize,
}

impl<T: Real> RadialGrid<T> {
    pub fn point(&self, i: usize) -> T {
        self.start + self.step * T::from_count(i)
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len).map(|i| self.point(i))
    }

    pub fn end(&self) -> T {
        self.point(self.len.saturating_sub(1))
    }
}

/// Box, step and mass for the radial solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<T> {
    pub r_min: T,
    pub r_max: T,
    pub step: T,
    /// Reduced mass in electron masses.
    pub reduced_mass: T,
    /// Adds `J(J+1)/(2μR²)` to the potential.
    pub centrifugal: bool,
    /// Re-solves the ground state on a halved step and fails if it moves.
    pub check_convergence: bool,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(r_min: T, r_max: T, step: T, isotope: RubidiumIsotope) -> Self {
        Self {
            r_min,
            r_max,
            step,
            reduced_mass: isotope.dimer_reduced_mass(),
            centrifugal: false,
            check_convergence: true,
        }
    }

    pub fn grid(&self) -> Result<RadialGrid<T>, StructureError> {
        if !(self.step > T::zero()) || !(self.r_max > self.r_min) || !(self.r_min > T::zero()) {
            return Err(StructureError::InvalidConfig(format!(
                "need 0 < r_min < r_max and step > 0, got [{}, {}] step {}",
                self.r_min, self.r_max, self.step
            )));
        }
        if !(self.reduced_mass > T::zero()) {
            return Err(StructureError::InvalidConfig("reduced mass must be positive".into()));
        }
        let span = ((self.r_max - self.r_min) / self.step).floor();
        let len = span.to_usize().unwrap_or(0) + 1;
        Ok(RadialGrid { start: self.r_min, step: self.step, len })
    }
}

/// One rovibrational eigenstate on an electronic curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RovibState<T> {
    pub curve: String,
    pub lambda: i32,
    pub spin: HalfInteger,
    pub v: usize,
    pub j: HalfInteger,
    /// Hartree.
    pub energy: T,
    pub grid: RadialGrid<T>,
    /// Normalised so that `Σ χᵢ² · step = 1`.
    pub wavefunction: Vec<T>,
}

impl<T: Real> RovibState<T> {
    pub fn node_count(&self) -> usize {
        let max = self.wavefunction.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        let floor = max * lit(1e-6);
        let mut sign = 0i8;
        let mut nodes = 0;
        for x in &self.wavefunction {
            if x.abs() < floor {
                continue;
            }
            let s = if *x > T::zero() { 1 } else { -1 };
            if sign != 0 && s != sign {
                nodes += 1;
            }
            sign = s;
        }
        nodes
    }

    pub fn norm(&self) -> T {
        self.wavefunction.iter().map(|x| *x * *x).sum::<T>() * self.grid.step
    }
}

/// Sinc-DVR Hamiltonian on `grid`, assembled in `f64`.
fn hamiltonian<T: Real>(grid: &RadialGrid<T>, mass: T, potential: &impl Fn(T) -> T) -> DMatrix<f64> {
    let n = grid.len;
    let dx = grid.step.as_f64();
    let t0 = 1.0 / (2.0 * mass.as_f64() * dx * dx);
    let pi2_3 = std::f64::consts::PI.powi(2) / 3.0;
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            t0 * pi2_3 + potential(grid.point(i)).as_f64()
        } else {
            let d = i as f64 - j as f64;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            t0 * sign * 2.0 / (d * d)
        }
    })
}

/// Eigenpairs sorted by energy, lowest `count` only.
fn lowest_eigenpairs(h: DMatrix<f64>, count: usize) -> Result<Vec<(f64, Vec<f64>)>, StructureError> {
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 0)
        .ok_or_else(|| StructureError::Eigen("no convergence".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Ok(order
        .into_iter()
        .take(count)
        .map(|k| {
            let mut vec: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            let max = vec.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if let Some(first) = vec.iter().find(|x| x.abs() > 1e-3 * max) {
                if *first < 0.0 {
                    vec.iter_mut().for_each(|x| *x = -*x);
                }
            }
            (eig.eigenvalues[k], vec)
        })
        .collect())
}

/// Lowest `count` eigenstates of `−(1/2μ) d²/dR² + V(R)` with hard walls at
/// the box edges. `potential` is in hartree, `R` in bohr.
pub fn solve_vibrational_fn<T: Real>(
    label: &ElectronicLabel,
    potential: impl Fn(T) -> T,
    j: HalfInteger,
    count: usize,
    config: &SolverConfig<T>,
) -> Result<Vec<RovibState<T>>, StructureError> {
    let grid = config.grid()?;
    if count == 0 || count + 2 > grid.len {
        return Err(StructureError::InvalidConfig(format!(
            "requested {count} states on a {}-point grid (at most {})",
            grid.len,
            grid.len.saturating_sub(2)
        )));
    }
    let mu = config.reduced_mass;
    let jj: T = j.value::<T>() * (j.value::<T>() + T::one());
    let total = |r: T| {
        let v = potential(r);
        if config.centrifugal {
            v + jj / (lit::<T>(2.0) * mu * r * r)
        } else {
            v
        }
    };
    let pairs = lowest_eigenpairs(hamiltonian(&grid, mu, &total), count)?;

    if config.check_convergence {
        check_ground_state(&grid, mu, &total, &pairs[0])?;
    }

    let norm = T::one() / grid.step.sqrt();
    Ok(pairs
        .into_iter()
        .enumerate()
        .map(|(v, (energy, vec))| RovibState {
            curve: label.name.clone(),
            lambda: label.lambda,
            spin: label.spin,
            v,
            j,
            energy: T::lit(energy),
            grid,
            wavefunction: vec.into_iter().map(|c| T::lit(c) * norm).collect(),
        })
        .collect())
}

/// Ground state on a halved step, restricted to where the coarse ground state
/// has support.
fn check_ground_state<T: Real>(
    grid: &RadialGrid<T>,
    mu: T,
    potential: &impl Fn(T) -> T,
    ground: &(f64, Vec<f64>),
) -> Result<(), StructureError> {
    let (e0, vec) = ground;
    let max = vec.iter().fold(0.0f64, |m, x| m.max(x * x));
    let first = vec.iter().position(|x| x * x > SUPPORT_THRESHOLD * max).unwrap_or(0);
    let last = vec.iter().rposition(|x| x * x > SUPPORT_THRESHOLD * max).unwrap_or(grid.len - 1);
    let lo = first.saturating_sub(SUPPORT_PADDING);
    let hi = (last + SUPPORT_PADDING).min(grid.len - 1);
    let fine = RadialGrid { start: grid.point(lo), step: grid.step * lit(0.5), len: 2 * (hi - lo) + 1 };
    let refined = lowest_eigenpairs(hamiltonian(&fine, mu, potential), 1)?;
    let change = (refined[0].0 - e0).abs();
    if change > CONVERGENCE_LIMIT {
        return Err(StructureError::GridTooCoarse { change });
    }
    Ok(())
}

/// [`solve_vibrational_fn`] on a tabulated curve, interpolated by a natural
/// cubic spline. The box must lie inside the tabulated range.
pub fn solve_vibrational<T: Real>(
    curve: &ElectronicCurve<T>,
    j: HalfInteger,
    count: usize,
    config: &SolverConfig<T>,
) -> Result<Vec<RovibState<T>>, StructureError> {
    let spline = curve.spline();
    let (lo, hi) = spline.domain();
    let grid = config.grid()?;
    if grid.start < lo || grid.end() > hi {
        return Err(StructureError::InvalidConfig(format!(
            "box [{}, {}] exceeds the tabulated range [{lo}, {hi}] of {}",
            grid.start,
            grid.end(),
            curve.label.name
        )));
    }
    solve_vibrational_fn(&curve.label, |r| spline.eval(r), j, count, config)
}

#[cfg(test)]
mod tests {
    use super::super::Parity;
    use super::*;

    fn label() -> ElectronicLabel {
        ElectronicLabel { name: "test".into(), lambda: 0, spin: HalfInteger::ONE, parity: Some(Parity::Ungerade), index: 1 }
    }

    fn config(r_min: f64, r_max: f64, step: f64, mu: f64) -> SolverConfig<f64> {
        SolverConfig { r_min, r_max, step, reduced_mass: mu, centrifugal: false, check_convergence: true }
    }

    #[test]
    fn harmonic_levels_and_nodes() {
        let (k, r0, mu): (f64, f64, f64) = (0.01, 8.0, 2000.0);
        let omega = (k / mu).sqrt();
        let states =
            solve_vibrational_fn(&label(), |r: f64| 0.5 * k * (r - r0).powi(2), HalfInteger::ZERO, 21, &config(2.0, 14.0, 0.02, mu))
                .unwrap();
        for s in &states {
            let exact = omega * (s.v as f64 + 0.5);
            assert!(((s.energy - exact) / exact).abs() < 1e-8, "v={} {} vs {exact}", s.v, s.energy);
            assert_eq!(s.node_count(), s.v);
        }
    }

    #[test]
    fn orthonormal_states() {
        let states = solve_vibrational_fn(
            &label(),
            |r: f64| 0.02 * (1.0 - (-0.9 * (r - 8.0)).exp()).powi(2),
            HalfInteger::ZERO,
            10,
            &config(5.0, 16.0, 0.05, 3000.0),
        )
        .unwrap();
        for a in &states {
            for b in &states {
                let overlap: f64 = a.wavefunction.iter().zip(&b.wavefunction).map(|(x, y)| x * y).sum::<f64>() * a.grid.step;
                let expected = if a.v == b.v { 1.0 } else { 0.0 };
                assert!((overlap - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn coarse_grid_detected() {
        let r = solve_vibrational_fn(&label(), |r: f64| 0.5 * 0.05 * (r - 8.0).powi(2), HalfInteger::ZERO, 2, &config(5.0, 11.0, 0.25, 80000.0));
        assert!(matches!(r, Err(StructureError::GridTooCoarse { .. })));
    }

    #[test]
    fn centrifugal_term_raises_levels() {
        let pot = |r: f64| 0.5 * 0.01 * (r - 8.0).powi(2);
        let mut cfg = config(5.0, 11.0, 0.02, 2000.0);
        let e0 = solve_vibrational_fn(&label(), pot, HalfInteger::from_integer(3), 1, &cfg).unwrap()[0].energy;
        cfg.centrifugal = true;
        let e1 = solve_vibrational_fn(&label(), pot, HalfInteger::from_integer(3), 1, &cfg).unwrap()[0].energy;
        assert!(e1 > e0);
    }

    #[test]
    fn rejects_oversized_request() {
        let r = solve_vibrational_fn(&label(), |r: f64| r, HalfInteger::ZERO, 100, &config(5.0, 6.0, 0.1, 1.0));
        assert!(matches!(r, Err(StructureError::InvalidConfig(_))));
    }
}
