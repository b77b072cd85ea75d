use serde::{Deserialize, Serialize};

use crate::coords::{Cartesian, Cylindrical};
use crate::scalar::{lit, Real};
use crate::units;

use super::{potential_au, potential_cartesian_au, StatePolarisability, TrapConfiguration, TrapError};

const SCAN_POINTS: usize = 400;
const SCAN_START: f64 = 1.0 + 1e-6;
const SCAN_END: f64 = 5.0;
const LINE_TOLERANCE: f64 = 1e-6;
const SIMPLEX_STEP: f64 = 0.05;
const SIMPLEX_TOLERANCE: f64 = 1e-7;
const CONFIRM_DISTANCE: f64 = 1e-3;
const FTOL_AU: f64 = 1e-12;
const MAX_ITERATIONS: usize = 5000;

/// A located minimum on the `Θ = 0`, `Z = 0` ray plus its 3D confirmation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapMinimum<T> {
    pub r: T,
    pub theta: T,
    pub z: T,
    /// Hartree.
    pub u_au: T,
    /// Unconstrained 3D optimum (bohr) and its energy.
    pub refined: Cartesian<T>,
    pub refined_u_au: T,
}

impl<T: Real> TrapMinimum<T> {
    pub fn u_mk(&self) -> T {
        units::hartree_to_millikelvin(self.u_au)
    }

    pub fn position(&self) -> Cylindrical<T> {
        Cylindrical::new(self.r, self.theta, self.z)
    }
}

/// Golden-section search for a minimum of `f` on `[lo, hi]` to width `tol`.
pub fn golden_section<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> (T, T) {
    let inv_phi = (lit::<T>(5.0).sqrt() - T::one()) * lit(0.5);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = (lo + hi) * lit(0.5);
    (x, f(x))
}

/// Nelder–Mead simplex minimisation in three dimensions. Stops once the
/// simplex diameter is below `xtol` and the value spread below `ftol`.
pub fn nelder_mead<T: Real>(
    f: impl Fn([T; 3]) -> T,
    start: [T; 3],
    step: T,
    xtol: T,
    ftol: T,
    max_iterations: usize,
) -> ([T; 3], T) {
    let mut simplex: Vec<([T; 3], T)> = (0..4)
        .map(|k| {
            let mut p = start;
            if k > 0 {
                p[k - 1] = p[k - 1] + step;
            }
            (p, f(p))
        })
        .collect();
    let combine = |a: [T; 3], b: [T; 3], t: T| [0, 1, 2].map(|i| a[i] + t * (b[i] - a[i]));
    for _ in 0..max_iterations {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0];
        let worst = simplex[3];
        let diameter = simplex[1..]
            .iter()
            .map(|(p, _)| (0..3).map(|i| (p[i] - best.0[i]).abs()).fold(T::zero(), T::max))
            .fold(T::zero(), T::max);
        if diameter < xtol && (worst.1 - best.1).abs() < ftol {
            break;
        }
        let centroid = [0, 1, 2].map(|i| (simplex[0].0[i] + simplex[1].0[i] + simplex[2].0[i]) / lit(3.0));
        let reflected = combine(centroid, worst.0, -T::one());
        let fr = f(reflected);
        if fr < best.1 {
            let expanded = combine(centroid, worst.0, lit(-2.0));
            let fe = f(expanded);
            simplex[3] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[2].1 {
            simplex[3] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 {
                combine(centroid, reflected, lit(0.5))
            } else {
                combine(centroid, worst.0, lit(0.5))
            };
            let fc = f(contracted);
            if fc < worst.1.min(fr) {
                simplex[3] = (contracted, fc);
            } else {
                for vertex in simplex.iter_mut().skip(1) {
                    let p = combine(best.0, vertex.0, lit(0.5));
                    *vertex = (p, f(p));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    simplex[0]
}

/// Scans `U(R, 0, 0)` on `(a, 5a)`, refines by golden section and confirms
/// the point with an unconstrained simplex search.
pub fn find_minimum<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
) -> Result<TrapMinimum<T>, TrapError> {
    let a = config.radius();
    let on_ray = |r: T| potential_au(config, state, Cylindrical::new(r, T::zero(), T::zero()));
    let lo = a * lit(SCAN_START);
    let hi = a * lit(SCAN_END);
    let step = (hi - lo) / T::from_count(SCAN_POINTS - 1);
    let scan: Vec<(T, T)> = (0..SCAN_POINTS)
        .map(|k| {
            let r = lo + step * T::from_count(k);
            on_ray(r).map(|u| (r, u))
        })
        .collect::<Result<_, _>>()?;
    let best = scan
        .iter()
        .enumerate()
        .min_by(|x, y| x.1 .1.partial_cmp(&y.1 .1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(k, _)| k)
        .unwrap_or(0);
    if best == 0 || best + 1 == scan.len() {
        return Err(TrapError::NoMinimum {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            scan: scan.iter().map(|(r, u)| (r.as_f64(), units::hartree_to_millikelvin(u.as_f64()))).collect(),
        });
    }
    let f = |r: T| on_ray(r).unwrap_or_else(|_| T::infinity());
    let (r_min, u_min) = golden_section(f, scan[best - 1].0, scan[best + 1].0, a * lit(LINE_TOLERANCE));

    let in_3d = |p: [T; 3]| {
        potential_cartesian_au(config, state, Cartesian::new(p[0], p[1], p[2])).unwrap_or_else(|_| T::infinity())
    };
    let (p, u3) = nelder_mead(
        in_3d,
        [r_min, T::zero(), T::zero()],
        a * lit(SIMPLEX_STEP),
        a * lit(SIMPLEX_TOLERANCE),
        lit(FTOL_AU),
        MAX_ITERATIONS,
    );
    let offset = ((p[0] - r_min).powi(2) + p[1].powi(2) + p[2].powi(2)).sqrt();
    if offset > a * lit(CONFIRM_DISTANCE) {
        log::warn!(
            "3D refinement moved {:.3e} a away from the ray minimum (ΔU = {:.3e} mK)",
            (offset / a).as_f64(),
            units::hartree_to_millikelvin((u3 - u_min).as_f64())
        );
    }
    Ok(TrapMinimum {
        r: r_min,
        theta: T::zero(),
        z: T::zero(),
        u_au: u_min,
        refined: Cartesian::new(p[0], p[1], p[2]),
        refined_u_au: u3,
    })
}
