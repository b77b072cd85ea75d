//! Cylinder functions of integer order 0..=2.
//!
//! `J_n` uses the ascending power series for small arguments and Miller's
//! backward recurrence (normalised by `J₀ + 2ΣJ₂ₖ = 1`) above it. `K_n` uses
//! the logarithmic series for `x ≤ 2` and Steed's continued fraction (Temme's
//! CF2) above; `K₂` follows from the upward recurrence, which is stable for K.

use crate::scalar::{lit, Real};

use super::MathError;

const SERIES_LIMIT_J: f64 = 2.0;
const SERIES_LIMIT_K: f64 = 2.0;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 10_000;

fn check_order(order: u32) -> Result<(), MathError> {
    if order > 2 {
        Err(MathError::UnsupportedOrder(order))
    } else {
        Ok(())
    }
}

/// Bessel function of the first kind `J_order(x)` for `order ∈ {0, 1, 2}`
/// and `x ≥ 0`.
pub fn bessel_j<T: Real>(order: u32, x: T) -> Result<T, MathError> {
    check_order(order)?;
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(MathError::Domain { function: "bessel_j", argument: x.as_f64() });
    }
    Ok(bessel_j012(x)[order as usize])
}

/// Modified Bessel function of the second kind `K_order(x)` for
/// `order ∈ {0, 1, 2}` and `x > 0`.
pub fn bessel_k<T: Real>(order: u32, x: T) -> Result<T, MathError> {
    check_order(order)?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(MathError::Domain { function: "bessel_k", argument: x.as_f64() });
    }
    Ok(bessel_k012(x)[order as usize])
}

/// Derivative `J'_order(x)`. At `x = 0` the removable forms take their series
/// limits (`J₁'(0) = ½`, `J₂'(0) = 0`).
pub fn bessel_j_prime<T: Real>(order: u32, x: T) -> Result<T, MathError> {
    check_order(order)?;
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(MathError::Domain { function: "bessel_j_prime", argument: x.as_f64() });
    }
    let [j0, j1, j2] = bessel_j012(x);
    Ok(match order {
        0 => -j1,
        1 if x == T::zero() => lit(0.5),
        1 => j0 - j1 / x,
        _ if x == T::zero() => T::zero(),
        _ => j1 - lit::<T>(2.0) * j2 / x,
    })
}

/// Derivative `K'_order(x)` for `x > 0`.
pub fn bessel_k_prime<T: Real>(order: u32, x: T) -> Result<T, MathError> {
    check_order(order)?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(MathError::Domain { function: "bessel_k_prime", argument: x.as_f64() });
    }
    let [k0, k1, k2] = bessel_k012(x);
    let half = lit::<T>(0.5);
    Ok(match order {
        0 => -k1,
        1 => -(k0 + k2) * half,
        _ => {
            let k3 = k1 + lit::<T>(4.0) * k2 / x;
            -(k1 + k3) * half
        }
    })
}

/// `[J₀(x), J₁(x), J₂(x)]` for `x ≥ 0`.
pub fn bessel_j012<T: Real>(x: T) -> [T; 3] {
    if x <= lit(SERIES_LIMIT_J) {
        [j_series(0, x), j_series(1, x), j_series(2, x)]
    } else {
        j_miller(x)
    }
}

/// `[K₀(x), K₁(x), K₂(x)]` for `x > 0`.
pub fn bessel_k012<T: Real>(x: T) -> [T; 3] {
    let (k0, k1) = if x <= lit(SERIES_LIMIT_K) { k01_series(x) } else { k01_continued_fraction(x) };
    let k2 = k0 + lit::<T>(2.0) * k1 / x;
    [k0, k1, k2]
}

fn j_series<T: Real>(n: u32, x: T) -> T {
    let half_x = x * lit(0.5);
    let q = -half_x * half_x;
    // leading term (x/2)^n / n!
    let mut term = T::one();
    for i in 1..=n {
        term = term * half_x / T::from_count(i as usize);
    }
    let mut sum = term;
    for k in 1..MAX_ITER {
        term = term * q / (T::from_count(k) * T::from_count(k + n as usize));
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * lit(0.01) {
            break;
        }
    }
    sum
}

fn j_miller<T: Real>(x: T) -> [T; 3] {
    let xf = x.as_f64();
    let mut m = (1.2 * xf + 40.0).ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let two_over_x = lit::<T>(2.0) / x;
    let rescale_at = lit::<T>(1e10);
    let rescale_by = lit::<T>(1e-10);

    let mut above = T::zero(); // J_{k+1}
    let mut current = lit::<T>(1e-30); // J_k, arbitrary start
    let mut norm = T::zero();
    let mut out = [T::zero(); 3];
    if m <= 2 {
        out[m] = current;
    }
    let mut k = m;
    while k > 0 {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let below = T::from_count(k) * two_over_x * current - above;
        above = current;
        current = below;
        k -= 1;
        if k > 0 && k.is_multiple_of(2) {
            norm = norm + current;
        }
        if k <= 2 {
            out[k] = current;
        }
        if current.abs() > rescale_at {
            current = current * rescale_by;
            above = above * rescale_by;
            norm = norm * rescale_by;
            for v in out.iter_mut() {
                *v = *v * rescale_by;
            }
        }
    }
    let scale = current + lit::<T>(2.0) * norm;
    [out[0] / scale, out[1] / scale, out[2] / scale]
}

fn k01_series<T: Real>(x: T) -> (T, T) {
    let half_x = x * lit(0.5);
    let q = half_x * half_x;
    let log_term = half_x.ln();
    let gamma = lit::<T>(EULER_GAMMA);

    // I0, I1 and the harmonic-number sums of the logarithmic series
    let mut i0 = T::one();
    let mut i1 = half_x;
    let mut k0_tail = T::zero();
    // psi(1) + psi(2) = -2γ + 1
    let mut k1_tail = -lit::<T>(2.0) * gamma + T::one();
    let mut t0 = T::one(); // q^k / (k!)^2
    let mut t1 = T::one(); // q^k / (k! (k+1)!)
    let mut harmonic = T::zero(); // H_k
    for k in 1..MAX_ITER {
        let kf = T::from_count(k);
        t0 = t0 * q / (kf * kf);
        t1 = t1 * q / (kf * (kf + T::one()));
        harmonic = harmonic + T::one() / kf;
        let harmonic_next = harmonic + T::one() / (kf + T::one());
        i0 = i0 + t0;
        i1 = i1 + t1 * half_x;
        k0_tail = k0_tail + t0 * harmonic;
        let psi_sum = -lit::<T>(2.0) * gamma + harmonic + harmonic_next;
        k1_tail = k1_tail + t1 * psi_sum;
        if t0 <= T::epsilon() * lit(1e-3) && t1 <= T::epsilon() * lit(1e-3) {
            break;
        }
    }
    let k0 = -(log_term + gamma) * i0 + k0_tail;
    let k1 = T::one() / x + log_term * i1 - x * lit(0.25) * k1_tail;
    (k0, k1)
}

fn k01_continued_fraction<T: Real>(x: T) -> (T, T) {
    let two = lit::<T>(2.0);
    let a1 = lit::<T>(0.25);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for i in 2..MAX_ITER {
        let fi = T::from_count(i);
        a = a - two * (fi - T::one());
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() < T::epsilon() * lit(0.5) {
            break;
        }
    }
    h = a1 * h;
    let k0 = (T::PI() / (two * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + lit(0.5) - h) / x;
    (k0, k1)
}
