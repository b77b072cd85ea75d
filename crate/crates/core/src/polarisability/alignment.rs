use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Real;
use crate::special_math::{rational_to, wigner_3j_exact, HalfInteger};

use super::{Coupling, PolarError, StateLabel};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `⟨cos²θ⟩` of the symmetric top `|J Ω M⟩`, exact.
pub fn symmetric_top_cos2(j: HalfInteger, omega: HalfInteger, m: HalfInteger) -> BigRational {
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let tj = i64::from(j.twice_value());
    if tj < 2 {
        // no rank-2 moment below J = 1
        return third;
    }
    let x = tj * (tj + 2);
    let to = i64::from(omega.twice_value());
    let tm = i64::from(m.twice_value());
    let num = int((3 * to * to - x) * (3 * tm * tm - x));
    let den = int(4 * x * (tj - 1) * (tj + 3));
    third.clone() + int(2) * third * num / den
}

/// Weight of the case (a) component `Σ` in a case (b) state:
/// `(2N+1)·(J S N; Ω −Σ −Λ)²` with `Ω = Λ + Σ`.
pub fn case_b_weights(state: &StateLabel) -> Result<Vec<(HalfInteger, BigRational)>, PolarError> {
    let Coupling::B { n } = state.coupling else {
        return Err(PolarError::CaseMismatch);
    };
    let mut out = Vec::new();
    for sigma in state.spin.projections() {
        let omega = state.lambda + sigma;
        if omega.abs() > state.j {
            continue;
        }
        let w = wigner_3j_exact(state.j, state.spin, n, omega, -sigma, -state.lambda)?.squared()
            * int(i64::from(n.multiplicity()));
        if !w.is_zero() {
            out.push((sigma, w));
        }
    }
    Ok(out)
}

/// `a_Z = ⟨(e_Z·e_z)²⟩` for the molecular axis `e_z`, exact.
pub fn alignment_z_exact(state: &StateLabel) -> Result<BigRational, PolarError> {
    match state.coupling {
        Coupling::A { sigma } => Ok(symmetric_top_cos2(state.j, state.lambda + sigma, state.m)),
        Coupling::B { .. } => {
            let weights = case_b_weights(state)?;
            Ok(weights.into_iter().fold(BigRational::zero(), |acc, (sigma, w)| {
                acc + w * symmetric_top_cos2(state.j, state.lambda + sigma, state.m)
            }))
        }
    }
}

/// `(a_X, a_Y, a_Z)`; the distribution is symmetric about `Z`, so
/// `a_X = a_Y = (1 − a_Z)/2`.
pub fn alignment_analytic<T: Real>(state: &StateLabel) -> Result<[T; 3], PolarError> {
    let az = alignment_z_exact(state)?;
    let ax = (BigRational::one() - az.clone()) / int(2);
    Ok([rational_to(&ax), rational_to(&ax), rational_to(&az)])
}
