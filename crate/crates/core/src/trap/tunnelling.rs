use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::coords::Cylindrical;
use crate::scalar::{lit, Real};
use crate::units;

use super::minimum::golden_section;
use super::{potential_au, StatePolarisability, TrapConfiguration, TrapError, TrapMinimum};

const QUADRATURE_ORDER: usize = 48;
const PATH_SAMPLES: usize = 2000;
const BISECTION_STEPS: usize = 200;

/// WKB estimate along the arc between the lobes at `Θ = 0` and `Θ = π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tunnelling<T> {
    pub energy_mk: T,
    pub barrier_mk: T,
    /// `2∫√(2m(U − E)) ds`.
    pub exponent: T,
    pub transmission: T,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` from the Jacobi matrix.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut rule: Vec<(f64, f64)> =
        (0..n).map(|k| (eig.eigenvalues[k], 2.0 * eig.eigenvectors[(0, k)].powi(2))).collect();
    rule.sort_by(|x, y| x.0.total_cmp(&y.0));
    rule
}

/// `∫ √(U − E) ds` over a forbidden interval `[s_a, s_b]`, mapped by
/// `s = s_a + L(1 − cos φ)/2` so the endpoint square roots become smooth.
fn forbidden_integral<T: Real>(f: &impl Fn(T) -> T, s_a: T, s_b: T, e: T, rule: &[(f64, f64)]) -> T {
    let half_len = (s_b - s_a) * lit(0.5);
    let half_pi = T::PI() * lit(0.5);
    rule.iter()
        .map(|(x, w)| {
            let phi = half_pi * (lit::<T>(*x) + T::one());
            let s = s_a + half_len * (T::one() - phi.cos());
            let g = (f(s) - e).max(T::zero()).sqrt();
            lit::<T>(*w) * g * half_len * phi.sin() * half_pi
        })
        .fold(T::zero(), |acc, x| acc + x)
}

fn bisect<T: Real>(above: impl Fn(T) -> bool, mut below_at: T, mut above_at: T) -> T {
    for _ in 0..BISECTION_STEPS {
        let mid = (below_at + above_at) * lit(0.5);
        if mid == below_at || mid == above_at {
            break;
        }
        if above(mid) {
            above_at = mid;
        } else {
            below_at = mid;
        }
    }
    (below_at + above_at) * lit(0.5)
}

/// WKB exponent `2∫√(2m(U(s) − E)) ds` over every interval of `[s0, s1]`
/// where `U > E`; turning points are located by bisection.
pub fn wkb_exponent<T: Real>(f: impl Fn(T) -> T, s0: T, s1: T, e: T, mass: T) -> T {
    let rule = gauss_legendre(QUADRATURE_ORDER);
    let step = (s1 - s0) / T::from_count(PATH_SAMPLES);
    let at = |k: usize| s0 + step * T::from_count(k);
    let above = |s: T| f(s) > e;
    let mut total = T::zero();
    let mut start: Option<T> = above(s0).then_some(s0);
    for k in 1..=PATH_SAMPLES {
        let (prev, cur) = (at(k - 1), at(k));
        match (start, above(cur)) {
            (None, true) => start = Some(bisect(above, prev, cur)),
            (Some(s_a), false) => {
                let s_b = bisect(|s| !above(s), prev, cur);
                total = total + forbidden_integral(&f, s_a, s_b, e, &rule);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s_a) = start {
        total = total + forbidden_integral(&f, s_a, s1, e, &rule);
    }
    lit::<T>(2.0) * (lit::<T>(2.0) * mass).sqrt() * total
}

/// Transmission `exp(−exponent)` at energy `e_au` (hartree) along
/// `s = R_min Θ`, `Θ ∈ [0, π]`, `Z = 0`.
pub fn tunneling_estimate<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    minimum: &TrapMinimum<T>,
    e_au: T,
) -> Result<Tunnelling<T>, TrapError> {
    let r = minimum.r;
    let u = |theta: T| potential_au(config, state, Cylindrical::new(r, theta, minimum.z));
    let step = T::PI() / T::from_count(PATH_SAMPLES);
    let mut best = (T::zero(), u(T::zero())?);
    for k in 1..=PATH_SAMPLES {
        let theta = step * T::from_count(k);
        let value = u(theta)?;
        if value > best.1 {
            best = (theta, value);
        }
    }
    let neg = |theta: T| -u(theta).unwrap_or_else(|_| T::neg_infinity());
    let lo = (best.0 - step).max(T::zero());
    let hi = (best.0 + step).min(T::PI());
    let (_, top) = golden_section(neg, lo, hi, step * lit(1e-6));
    let barrier = (-top).max(best.1);
    let mk = units::hartree_to_millikelvin::<T>;
    if e_au >= barrier {
        return Err(TrapError::AboveBarrier { energy_mk: mk(e_au).as_f64(), barrier_mk: mk(barrier).as_f64() });
    }
    let along = |s: T| u(s / r).unwrap_or_else(|_| T::infinity());
    let exponent = wkb_exponent(along, T::zero(), r * T::PI(), e_au, config.mass);
    Ok(Tunnelling { energy_mk: mk(e_au), barrier_mk: mk(barrier), exponent, transmission: (-exponent).exp() })
}
