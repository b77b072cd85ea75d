use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};
use crate::special_math::HalfInteger;

use super::{CubicSpline, DipoleFunction, RovibState, StructureError};

const COVERAGE_LIMIT: f64 = 1e-6;
const NEGLIGIBLE_DIPOLE: f64 = 1e-12;

/// One term of the sum over intermediate states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionEntry<T> {
    /// `E_{n'} − E_n` in hartree.
    pub omega: T,
    /// Radial matrix element `⟨v|d|v'⟩` in atomic units.
    pub dipole: T,
    pub curve: String,
    /// `|Λ'|` of the final electronic state.
    pub lambda: i32,
    pub spin: HalfInteger,
    pub v: usize,
}

impl<T: Real> TransitionEntry<T> {
    pub fn is_parallel(&self, initial_lambda: i32) -> bool {
        self.lambda == initial_lambda
    }
}

/// `ket` sampled on the points of `bra`'s grid.
fn resample<T: Real>(bra: &RovibState<T>, ket: &RovibState<T>) -> Vec<T> {
    if bra.grid == ket.grid {
        return ket.wavefunction.clone();
    }
    let xs: Vec<T> = ket.grid.points().collect();
    let spline = CubicSpline::natural(xs, ket.wavefunction.clone()).expect("uniform grid");
    bra.grid.points().map(|r| if spline.contains(r) { spline.eval(r) } else { T::zero() }).collect()
}

fn outside_fraction<T: Real>(state: &RovibState<T>, lo: T, hi: T) -> T {
    state
        .grid
        .points()
        .zip(&state.wavefunction)
        .filter(|(r, _)| *r < lo || *r > hi)
        .map(|(_, x)| *x * *x)
        .sum::<T>()
        * state.grid.step
}

/// `∫ χ_v(R) d(R) χ_{v'}(R) dR` on the bra's grid.
pub fn transition_dipole_me<T: Real>(
    bra: &RovibState<T>,
    ket: &RovibState<T>,
    dipole: &DipoleFunction<T>,
) -> Result<T, StructureError> {
    let (lo, hi) = dipole.range();
    let fraction = outside_fraction(bra, lo, hi).max(outside_fraction(ket, lo, hi));
    if fraction > lit(COVERAGE_LIMIT) {
        return Err(StructureError::Coverage { fraction: fraction.as_f64(), lo: lo.as_f64(), hi: hi.as_f64() });
    }
    let spline = dipole.spline();
    let ket_values = resample(bra, ket);
    let sum = bra
        .grid
        .points()
        .zip(bra.wavefunction.iter().zip(&ket_values))
        .filter(|(r, _)| spline.contains(*r))
        .map(|(r, (x, y))| *x * spline.eval(r) * *y)
        .sum::<T>();
    Ok(sum * bra.grid.step)
}

/// Transitions from `initial` to every state of `finals` that some dipole
/// function connects, sorted by transition energy.
pub fn transition_table<T: Real>(
    initial: &RovibState<T>,
    finals: &[RovibState<T>],
    dipoles: &[DipoleFunction<T>],
) -> Result<Vec<TransitionEntry<T>>, StructureError> {
    let mut table = Vec::new();
    for state in finals {
        let Some(dipole) = dipoles.iter().find(|d| d.connects(&initial.curve, &state.curve)) else {
            continue;
        };
        let d = transition_dipole_me(initial, state, dipole)?;
        if d.abs() < lit(NEGLIGIBLE_DIPOLE) {
            continue;
        }
        table.push(TransitionEntry {
            omega: state.energy - initial.energy,
            dipole: d,
            curve: state.curve.clone(),
            lambda: state.lambda,
            spin: state.spin,
            v: state.v,
        });
    }
    table.sort_by(|a, b| a.omega.partial_cmp(&b.omega).unwrap_or(std::cmp::Ordering::Equal));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::super::tests::label;
    use super::super::{solve_vibrational_fn, SolverConfig};
    use super::*;

    fn harmonic(name: &str, lambda: i32, k: f64, r0: f64, offset: f64, count: usize) -> Vec<RovibState<f64>> {
        let cfg = SolverConfig { r_min: 4.0, r_max: 12.0, step: 0.02, reduced_mass: 2000.0, centrifugal: false, check_convergence: false };
        solve_vibrational_fn(&label(name, lambda), |r: f64| offset + 0.5 * k * (r - r0).powi(2), HalfInteger::ZERO, count, &cfg).unwrap()
    }

    fn dipole(f: impl Fn(f64) -> f64, lo: f64, hi: f64, from: i32, to: i32) -> DipoleFunction<f64> {
        let grid: Vec<f64> = (0..=400).map(|i| lo + (hi - lo) * f64::from(i) / 400.0).collect();
        let values = grid.iter().map(|r| f(*r)).collect();
        DipoleFunction::new(&label("x", from), &label("e", to), grid, values).unwrap()
    }

    #[test]
    fn constant_dipole_projects_onto_overlap() {
        let states = harmonic("x", 0, 0.01, 8.0, 0.0, 4);
        let d = dipole(|_| 2.5, 3.0, 13.0, 0, 0);
        assert!((transition_dipole_me(&states[1], &states[1], &d).unwrap() - 2.5).abs() < 1e-10);
        assert!(transition_dipole_me(&states[0], &states[2], &d).unwrap().abs() < 1e-10);
    }

    #[test]
    fn linear_dipole_matches_ladder_elements() {
        let (k, mu): (f64, f64) = (0.01, 2000.0);
        let omega: f64 = (k / mu).sqrt();
        let states = harmonic("x", 0, k, 8.0, 0.0, 7);
        let d = dipole(|r| 0.3 * (r - 8.0), 3.0, 13.0, 0, 0);
        for v in 0..5 {
            let expected = 0.3 * ((v as f64 + 1.0) / (2.0 * mu * omega)).sqrt();
            let got = transition_dipole_me(&states[v], &states[v + 1], &d).unwrap();
            assert!((got.abs() - expected).abs() < 1e-10 * expected.max(1.0), "v={v}: {got} vs {expected}");
            assert!(transition_dipole_me(&states[v], &states[v + 2], &d).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn narrow_dipole_range_fails_coverage() {
        let states = harmonic("x", 0, 0.01, 8.0, 0.0, 2);
        let d = dipole(|_| 1.0, 7.9, 13.0, 0, 0);
        assert!(matches!(transition_dipole_me(&states[0], &states[0], &d), Err(StructureError::Coverage { .. })));
    }

    #[test]
    fn table_is_sorted_and_filtered() {
        let ground = harmonic("x", 0, 0.01, 8.0, 0.0, 1);
        let excited = harmonic("e", 1, 0.01, 8.0, 0.05, 6);
        let d = dipole(|_| 1.0, 3.0, 13.0, 0, 1);
        // constant dipole, identical wells: only v' = 0 survives
        let table = transition_table(&ground[0], &excited, std::slice::from_ref(&d)).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table[0].v, 0);
        assert!(!table[0].is_parallel(0));

        let shifted = harmonic("e", 1, 0.01, 8.3, 0.05, 8);
        let table = transition_table(&ground[0], &shifted, &[d]).unwrap();
        assert!(table.len() > 3);
        assert!(table.windows(2).all(|w| w[0].omega <= w[1].omega));
        assert!(transition_table(&ground[0], &[], &[]).unwrap().is_empty());
    }
}
