use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::Cartesian;
use crate::scalar::{lit, Real};

use super::{potential_cartesian_au, StatePolarisability, TrapConfiguration, TrapError, TrapMinimum};

const MARCH_STEP: f64 = 0.01;
const MARCH_LIMIT: f64 = 10.0;
const BISECTION_STEPS: usize = 60;
const BOX_MARGIN: f64 = 1.15;

/// Quadrature settings for the phase-space count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylGrid {
    /// Cells per axis on the first pass.
    pub initial_cells: usize,
    /// Growth factor of the per-axis cell count between passes.
    pub growth: f64,
    /// Relative change between passes accepted as converged.
    pub tolerance: f64,
    pub max_passes: usize,
    /// Box enlargements allowed when the fill reaches the box boundary.
    pub max_expansions: usize,
}

impl Default for WeylGrid {
    fn default() -> Self {
        Self { initial_cells: 24, growth: 1.5, tolerance: 0.01, max_passes: 6, max_expansions: 6 }
    }
}

/// Result of [`flood_fill_weyl`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylCount<T> {
    pub count: T,
    /// Cells per axis on the final pass.
    pub cells: [usize; 3],
    pub converged: bool,
}

struct Fill<T> {
    integral: T,
    touches: [bool; 6],
}

fn fill_once<T: Real>(
    f: &(impl Fn([T; 3]) -> Option<T> + Sync),
    seed: [T; 3],
    e_b: T,
    lo: [T; 3],
    hi: [T; 3],
    n: [usize; 3],
) -> Fill<T> {
    let d = [0, 1, 2].map(|i| (hi[i] - lo[i]) / T::from_count(n[i]));
    let centre = |i: usize, k: usize| lo[i] + d[i] * (T::from_count(k) + lit(0.5));
    let total = n[0] * n[1] * n[2];
    let index = |c: [usize; 3]| (c[0] * n[1] + c[1]) * n[2] + c[2];
    let values: Vec<Option<T>> = (0..total)
        .into_par_iter()
        .map(|k| {
            let c = [k / (n[1] * n[2]), (k / n[2]) % n[1], k % n[2]];
            f([centre(0, c[0]), centre(1, c[1]), centre(2, c[2])]).filter(|u| *u < e_b)
        })
        .collect();
    let seed_cell = [0, 1, 2].map(|i| {
        let k = ((seed[i] - lo[i]) / d[i]).floor().to_isize().unwrap_or(0);
        k.clamp(0, n[i] as isize - 1) as usize
    });
    let mut visited = vec![false; total];
    let mut touches = [false; 6];
    let mut queue = VecDeque::new();
    if values[index(seed_cell)].is_some() {
        visited[index(seed_cell)] = true;
        queue.push_back(seed_cell);
    }
    while let Some(c) = queue.pop_front() {
        for axis in 0..3 {
            if c[axis] == 0 {
                touches[2 * axis] = true;
            }
            if c[axis] + 1 == n[axis] {
                touches[2 * axis + 1] = true;
            }
            for up in [false, true] {
                let mut next = c;
                if up && c[axis] + 1 < n[axis] {
                    next[axis] += 1;
                } else if !up && c[axis] > 0 {
                    next[axis] -= 1;
                } else {
                    continue;
                }
                let k = index(next);
                if !visited[k] && values[k].is_some() {
                    visited[k] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    let cell_volume = d[0] * d[1] * d[2];
    let integral = values
        .iter()
        .zip(&visited)
        .filter(|(_, v)| **v)
        .filter_map(|(u, _)| *u)
        .map(|u| (e_b - u).powf(lit(1.5)))
        .fold(T::zero(), |acc, x| acc + x)
        * cell_volume;
    Fill { integral, touches }
}

/// Semiclassical count `(2m)^{3/2}/(6π²) ∫ (E_b − U)^{3/2} d³r` over the
/// 6-connected region `U < E_b` containing `seed`. `f` returns `None` where
/// the potential is undefined. The box `[lo, hi]` grows while the region
/// touches its faces; the grid is refined until successive passes agree.
pub fn flood_fill_weyl<T: Real>(
    f: impl Fn([T; 3]) -> Option<T> + Sync,
    seed: [T; 3],
    e_b: T,
    mass: T,
    mut lo: [T; 3],
    mut hi: [T; 3],
    settings: &WeylGrid,
) -> WeylCount<T> {
    let prefactor = (lit::<T>(2.0) * mass).powf(lit(1.5)) / (lit::<T>(6.0) * T::PI() * T::PI());
    let cells_at = |pass: usize| {
        let n = (settings.initial_cells as f64 * settings.growth.powi(pass as i32)).round() as usize;
        [n.max(2); 3]
    };
    let mut pass = 0;
    let mut expansions = 0;
    let mut previous: Option<T> = None;
    loop {
        let n = cells_at(pass);
        let fill = fill_once(&f, seed, e_b, lo, hi, n);
        if fill.touches.iter().any(|t| *t) && expansions < settings.max_expansions {
            for axis in 0..3 {
                let width = (hi[axis] - lo[axis]) * lit(0.25);
                if fill.touches[2 * axis] {
                    lo[axis] = lo[axis] - width;
                }
                if fill.touches[2 * axis + 1] {
                    hi[axis] = hi[axis] + width;
                }
            }
            expansions += 1;
            previous = None;
            continue;
        }
        let count = prefactor * fill.integral;
        let converged = previous.is_some_and(|p: T| ((count - p) / count).abs() < lit(settings.tolerance));
        if converged || pass + 1 >= settings.max_passes || count == T::zero() {
            if !converged && count > T::zero() {
                log::warn!("phase-space count not converged after {} passes", pass + 1);
            }
            return WeylCount { count, cells: n, converged: converged || count == T::zero() };
        }
        previous = Some(count);
        pass += 1;
    }
}

/// Distance from `centre` along `dir` to where `inside` first fails.
fn reach<T: Real>(inside: impl Fn([T; 3]) -> bool, centre: [T; 3], dir: [T; 3], step: T, limit: T) -> T {
    let at = |t: T| [0, 1, 2].map(|i| centre[i] + dir[i] * t);
    let mut good = T::zero();
    let mut bad = step;
    while inside(at(bad)) {
        good = bad;
        bad = bad + step;
        if bad > limit {
            return limit;
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = (good + bad) * lit(0.5);
        if inside(at(mid)) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    (good + bad) * lit(0.5)
}

/// Distances (bohr) from the minimum to the `U = E_b` surface along
/// `−X, +X, −Y, +Y, −Z, +Z`, stopping at the fibre surface.
fn axis_reaches<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    minimum: &TrapMinimum<T>,
    e_b_au: T,
) -> [T; 6] {
    let a = config.radius();
    let p = minimum.position().to_cartesian();
    let inside = |q: [T; 3]| {
        potential_cartesian_au(config, state, Cartesian::new(q[0], q[1], q[2])).is_ok_and(|u| u < e_b_au)
    };
    let mut out = [T::zero(); 6];
    for axis in 0..3 {
        for (s, sign) in [-T::one(), T::one()].into_iter().enumerate() {
            let mut dir = [T::zero(); 3];
            dir[axis] = sign;
            out[2 * axis + s] = reach(inside, [p.x, p.y, p.z], dir, a * lit(MARCH_STEP), a * lit(MARCH_LIMIT));
        }
    }
    out
}

/// Full widths `(ΔX, ΔY, ΔZ)` in units of `a` of the `U < E_b` lobe,
/// measured along axes through the minimum.
pub fn lobe_extent<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    minimum: &TrapMinimum<T>,
    e_b_au: T,
) -> Result<[T; 3], TrapError> {
    check_boundary(minimum, e_b_au)?;
    let d = axis_reaches(config, state, minimum, e_b_au);
    let a = config.radius();
    Ok([0, 1, 2].map(|i| (d[2 * i] + d[2 * i + 1]) / a))
}

fn check_boundary<T: Real>(minimum: &TrapMinimum<T>, e_b_au: T) -> Result<(), TrapError> {
    if e_b_au < minimum.u_au {
        return Err(TrapError::BoundaryBelowMinimum {
            boundary_mk: crate::units::hartree_to_millikelvin(e_b_au.as_f64()),
            minimum_mk: minimum.u_mk().as_f64(),
        });
    }
    Ok(())
}

/// Phase-space count of translational states in the lobe around `minimum`
/// below `e_b_au` (hartree). Zero when `E_b ≤ U_min`.
pub fn count_bound_states<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    minimum: &TrapMinimum<T>,
    e_b_au: T,
    settings: &WeylGrid,
) -> WeylCount<T> {
    if !(e_b_au > minimum.u_au) {
        return WeylCount { count: T::zero(), cells: [0; 3], converged: true };
    }
    let d = axis_reaches(config, state, minimum, e_b_au);
    let p = minimum.position().to_cartesian();
    let centre = [p.x, p.y, p.z];
    let margin = lit::<T>(BOX_MARGIN);
    let lo = [0, 1, 2].map(|i| centre[i] - d[2 * i] * margin);
    let hi = [0, 1, 2].map(|i| centre[i] + d[2 * i + 1] * margin);
    let f = |q: [T; 3]| potential_cartesian_au(config, state, Cartesian::new(q[0], q[1], q[2])).ok();
    flood_fill_weyl(f, centre, e_b_au, config.mass, lo, hi, settings)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_levels(omega: [f64; 3], e: f64) -> usize {
        let mut count = 0;
        let mut nx = 0;
        while omega[0] * (nx as f64 + 0.5) + 0.5 * (omega[1] + omega[2]) < e {
            let mut ny = 0;
            while omega[0] * (nx as f64 + 0.5) + omega[1] * (ny as f64 + 0.5) + 0.5 * omega[2] < e {
                let rest = e - omega[0] * (nx as f64 + 0.5) - omega[1] * (ny as f64 + 0.5);
                count += ((rest / omega[2] - 0.5).ceil().max(0.0)) as usize;
                ny += 1;
            }
            nx += 1;
        }
        count
    }

    #[test]
    fn harmonic_count_tracks_enumeration() {
        let mass = 1.0;
        let omega = [1.0, 0.7, 1.3];
        let e = 14.0;
        let k = omega.map(|w| mass * w * w);
        let f = |p: [f64; 3]| Some((0..3).map(|i| 0.5 * k[i] * p[i] * p[i]).sum::<f64>());
        let half = [0, 1, 2].map(|i| (2.0 * e / k[i]).sqrt() * 0.6);
        let got = flood_fill_weyl(f, [0.0; 3], e, mass, half.map(|h| -h), half, &WeylGrid::default());
        let weyl = e.powi(3) / (6.0 * omega.iter().product::<f64>());
        let exact = exact_levels(omega, e) as f64;
        assert!(exact > 100.0);
        assert!(got.converged);
        assert!(((got.count - weyl) / weyl).abs() < 0.02, "{} vs {weyl}", got.count);
        assert!(((got.count - exact) / exact).abs() < 0.15, "{} vs {exact}", got.count);
    }

    #[test]
    fn disconnected_lobes_counted_once() {
        let one = |p: [f64; 3]| 0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        let f = |p: [f64; 3]| Some(one([p[0] - 5.0, p[1], p[2]]).min(one([p[0] + 5.0, p[1], p[2]])));
        let single = flood_fill_weyl(|p| Some(one(p)), [0.0; 3], 4.0, 1.0, [-3.0; 3], [3.0; 3], &WeylGrid::default());
        let double = flood_fill_weyl(f, [5.0, 0.0, 0.0], 4.0, 1.0, [-9.0, -3.0, -3.0], [9.0, 3.0, 3.0], &WeylGrid::default());
        assert!(((single.count - double.count) / single.count).abs() < 0.02);
    }

    #[test]
    fn empty_region_gives_zero() {
        let f = |p: [f64; 3]| Some(p[0] * p[0]);
        let got = flood_fill_weyl(f, [0.0; 3], 0.0, 1.0, [-1.0; 3], [1.0; 3], &WeylGrid::default());
        assert_eq!(got.count, 0.0);
    }

    #[test]
    fn reach_finds_sphere_radius() {
        let r = reach(|p: [f64; 3]| p.iter().map(|x| x * x).sum::<f64>() < 4.0, [0.0; 3], [0.0, 1.0, 0.0], 0.1, 10.0);
        assert!((r - 2.0).abs() < 1e-12);
    }
}
