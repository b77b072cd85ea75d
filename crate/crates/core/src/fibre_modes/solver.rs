use crate::scalar::{lit, Real};
use crate::special_math::{bessel_j012, bessel_k012};
use crate::units;

use super::{FibreGeometry, ModeError, ModeSolution};

const SCAN_POINTS: usize = 2000;
const WINDOW_MARGIN: f64 = 1e-9;
const RESIDUAL_TOLERANCE: f64 = 1e-6;

/// Brackets found while scanning the guided window in `β·a`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootScan<T> {
    pub lower: T,
    pub upper: T,
    pub brackets: Vec<(T, T)>,
}

/// Residual `lhs − rhs` of the HE₁₁ characteristic equation as a function of
/// the dimensionless propagation constant `β·a`.
pub fn characteristic_residual<T: Real>(geometry: &FibreGeometry<T>, k0: T, beta_a: T) -> T {
    let a = geometry.radius;
    let (n1, n2) = (geometry.n_core, geometry.n_clad);
    let ka = k0 * a;
    let ha = (ka * ka * n1 * n1 - beta_a * beta_a).sqrt();
    let qa = (beta_a * beta_a - ka * ka * n2 * n2).sqrt();
    let [j0, j1, _] = bessel_j012(ha);
    let [k0q, k1q, k2q] = bessel_k012(qa);
    let k1_prime = -(k0q + k2q) * lit(0.5);
    let kk = k1_prime / (qa * k1q);
    let n1sq = n1 * n1;
    let n2sq = n2 * n2;
    let two = lit::<T>(2.0);

    let lhs = j0 / (ha * j1);
    let inv = T::one() / (qa * qa) + T::one() / (ha * ha);
    let root_term = ((n1sq - n2sq) / (two * n1sq) * kk).powi(2) + (beta_a / (n1 * ka)).powi(2) * inv * inv;
    let rhs = -(n1sq + n2sq) / (two * n1sq) * kk + T::one() / (ha * ha) - root_term.sqrt();
    lhs - rhs
}

fn scan<T: Real>(geometry: &FibreGeometry<T>, k0: T) -> RootScan<T> {
    let ka = k0 * geometry.radius;
    let eps = lit::<T>(WINDOW_MARGIN).max(T::epsilon() * lit(4.0) * ka);
    let lower = ka * geometry.n_clad + eps;
    let upper = ka * geometry.n_core - eps;
    let step = (upper - lower) / T::from_count(SCAN_POINTS - 1);
    let points: Vec<(T, T)> = (0..SCAN_POINTS)
        .map(|i| {
            let x = lower + step * T::from_count(i);
            (x, characteristic_residual(geometry, k0, x))
        })
        .collect();
    let brackets = points
        .windows(2)
        .filter(|w| w[0].1.is_finite() && w[1].1.is_finite() && (w[0].1 < T::zero()) != (w[1].1 < T::zero()))
        .map(|w| (w[0].0, w[1].0))
        .collect();
    RootScan { lower, upper, brackets }
}

/// Bisection followed by a guarded secant polish. Returns `None` when the
/// bracket straddles a pole rather than a root.
fn refine<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> Option<T> {
    let mut f_lo = f(lo);
    let f_hi0 = f(hi);
    let scale = f_lo.abs().max(f_hi0.abs());
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi || hi - lo <= T::epsilon() * lit::<T>(16.0) * mid.abs() {
            break;
        }
        let f_mid = f(mid);
        if (f_mid < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let f_hi = f(hi);
    let mut root = if f_hi != f_lo { lo - f_lo * (hi - lo) / (f_hi - f_lo) } else { (lo + hi) * lit(0.5) };
    if !(root >= lo && root <= hi) {
        root = (lo + hi) * lit(0.5);
    }
    let residual = f(root).abs();
    // a pole leaves a large residual of either sign at the collapsed bracket
    let tolerance = lit::<T>(RESIDUAL_TOLERANCE).max(T::epsilon().sqrt());
    if !residual.is_finite() || residual > scale.max(T::one()) * tolerance {
        return None;
    }
    Some(root)
}

/// Solves the HE₁₁ characteristic equation for `β` on the guided window
/// `k₀n₂ < β < k₀n₁`. Exactly one root is expected (single-mode regime).
pub fn solve_propagation_constant<T: Real>(
    geometry: &FibreGeometry<T>,
    wavenumber: T,
) -> Result<ModeSolution<T>, ModeError> {
    if !(wavenumber > T::zero()) || !wavenumber.is_finite() {
        return Err(ModeError::InvalidWavenumber(wavenumber.as_f64()));
    }
    let k0 = units::wavenumber_to_k0(wavenumber);
    let scan = scan(geometry, k0);
    let roots: Vec<T> = scan
        .brackets
        .iter()
        .filter_map(|&(lo, hi)| refine(|x| characteristic_residual(geometry, k0, x), lo, hi))
        .collect();
    let beta_a = match roots.as_slice() {
        [] => return Err(ModeError::NoGuidedMode { wavenumber: wavenumber.as_f64() }),
        [single] => *single,
        many => {
            return Err(ModeError::MultipleRoots {
                wavenumber: wavenumber.as_f64(),
                roots: many.iter().map(|r| r.as_f64()).collect(),
            })
        }
    };

    let a = geometry.radius;
    let beta = beta_a / a;
    let h = (k0 * k0 * geometry.n_core * geometry.n_core - beta * beta).sqrt();
    let q = (beta * beta - k0 * k0 * geometry.n_clad * geometry.n_clad).sqrt();
    let s = structure_parameter(h * a, q * a);
    Ok(ModeSolution { geometry: *geometry, wavenumber, k0, beta, h, q, s })
}

/// `s = [1/(ha)² + 1/(qa)²] / [J₁'(ha)/(ha J₁(ha)) + K₁'(qa)/(qa K₁(qa))]`.
fn structure_parameter<T: Real>(ha: T, qa: T) -> T {
    let [j0, j1, _] = bessel_j012(ha);
    let [k0, k1, k2] = bessel_k012(qa);
    let j1_prime = j0 - j1 / ha;
    let k1_prime = -(k0 + k2) * lit(0.5);
    let num = T::one() / (ha * ha) + T::one() / (qa * qa);
    let den = j1_prime / (ha * j1) + k1_prime / (qa * k1);
    num / den
}
