use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Real;
use crate::special_math::{rational_to, wigner_3j_exact, wigner_6j_exact, HalfInteger};

use super::{Coupling, PolarError, StateLabel};

fn rational(n: i32) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn parity_sign(twice: i32) -> BigRational {
    // (-1)^(twice/2); callers pass even arguments only
    if (twice / 2) % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn mu_half(mu: i32) -> Result<HalfInteger, PolarError> {
    if !(-1..=1).contains(&mu) {
        return Err(PolarError::InvalidComponent(mu));
    }
    Ok(HalfInteger::from_integer(mu))
}

fn pair_ok(j: HalfInteger, m: HalfInteger) -> bool {
    m.abs() <= j && (j - m).is_integer()
}

fn three_j_sq(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    m1: HalfInteger,
    m2: HalfInteger,
    m3: HalfInteger,
) -> Result<BigRational, PolarError> {
    if !(pair_ok(j1, m1) && pair_ok(j2, m2) && pair_ok(j3, m3)) {
        return Ok(BigRational::zero());
    }
    Ok(wigner_3j_exact(j1, j2, j3, m1, m2, m3)?.squared())
}

/// Angular part of the case (a) strength, exact, for `|d| = 1`.
pub fn angular_factor_case_a(n: &StateLabel, np: &StateLabel, mu: i32) -> Result<BigRational, PolarError> {
    let (Coupling::A { sigma }, Coupling::A { sigma: sigma_p }) = (n.coupling, np.coupling) else {
        return Err(PolarError::CaseMismatch);
    };
    let mu = mu_half(mu)?;
    if n.spin != np.spin || sigma != sigma_p || np.m != n.m + mu {
        return Ok(BigRational::zero());
    }
    let one = HalfInteger::ONE;
    let q = n.lambda - np.lambda;
    let omega = n.lambda + sigma;
    let omega_p = np.lambda + sigma_p;
    let rot = three_j_sq(n.j, one, np.j, -n.m, -mu, np.m)?;
    let body = three_j_sq(n.j, one, np.j, -omega, q, omega_p)?;
    let degeneracy = rational(n.j.multiplicity() * np.j.multiplicity());
    Ok(parity_sign(mu.twice_value()) * degeneracy * rot * body)
}

/// Angular part of the case (b) strength, exact, for `|d| = 1`.
pub fn angular_factor_case_b(n: &StateLabel, np: &StateLabel, mu: i32) -> Result<BigRational, PolarError> {
    let (Coupling::B { n: big_n }, Coupling::B { n: big_np }) = (n.coupling, np.coupling) else {
        return Err(PolarError::CaseMismatch);
    };
    let mu = mu_half(mu)?;
    if n.spin != np.spin || np.m != n.m + mu {
        return Ok(BigRational::zero());
    }
    let one = HalfInteger::ONE;
    let q = n.lambda - np.lambda;
    let six_j = wigner_6j_exact(one, np.j, n.j, n.spin, big_n, big_np)?.squared();
    let body = three_j_sq(big_n, one, big_np, -n.lambda, q, np.lambda)?;
    let rot = three_j_sq(n.j, one, np.j, -n.m, -mu, np.m)?;
    let degeneracy =
        rational(big_n.multiplicity() * big_np.multiplicity() * n.j.multiplicity() * np.j.multiplicity());
    let phase = parity_sign(2 * n.m.twice_value() + mu.twice_value());
    Ok(phase * degeneracy * six_j * body * rot)
}

/// `⟨n|d_ν|n'⟩⟨n'|d_μ|n⟩` with `ν = −μ`, Hund's case (a).
pub fn line_strength_case_a<T: Real>(n: &StateLabel, np: &StateLabel, mu: i32, dipole: T) -> Result<T, PolarError> {
    Ok(rational_to::<T>(&angular_factor_case_a(n, np, mu)?) * dipole * dipole)
}

/// `⟨n|d_ν|n'⟩⟨n'|d_μ|n⟩` with `ν = −μ`, Hund's case (b).
pub fn line_strength_case_b<T: Real>(n: &StateLabel, np: &StateLabel, mu: i32, dipole: T) -> Result<T, PolarError> {
    Ok(rational_to::<T>(&angular_factor_case_b(n, np, mu)?) * dipole * dipole)
}

/// Dispatches on the coupling case of `n`.
pub fn angular_factor(n: &StateLabel, np: &StateLabel, mu: i32) -> Result<BigRational, PolarError> {
    match n.coupling {
        Coupling::A { .. } => angular_factor_case_a(n, np, mu),
        Coupling::B { .. } => angular_factor_case_b(n, np, mu),
    }
}

/// Every final label reachable from `n` by a `μ` component into an
/// electronic state with `|Λ'| = lambda_abs` and vibrational index `v`.
pub fn final_labels(n: &StateLabel, lambda_abs: i32, v: usize, mu: i32) -> Vec<StateLabel> {
    let one = HalfInteger::ONE;
    let m_p = n.m + HalfInteger::from_integer(mu);
    let lambdas: Vec<HalfInteger> = if lambda_abs == 0 {
        vec![HalfInteger::ZERO]
    } else {
        vec![HalfInteger::from_integer(lambda_abs), HalfInteger::from_integer(-lambda_abs)]
    };
    let mut out = Vec::new();
    for lambda_p in lambdas {
        if (n.lambda - lambda_p).abs() > one {
            continue;
        }
        match n.coupling {
            Coupling::A { sigma } => {
                for j_p in HalfInteger::coupled_range(n.j, one) {
                    let label = StateLabel { lambda: lambda_p, spin: n.spin, coupling: Coupling::A { sigma }, v, j: j_p, m: m_p };
                    if let Ok(l) = label.validated() {
                        out.push(l);
                    }
                }
            }
            Coupling::B { n: big_n } => {
                for n_p in HalfInteger::coupled_range(big_n, one) {
                    for j_p in HalfInteger::coupled_range(n.j, one) {
                        let label =
                            StateLabel { lambda: lambda_p, spin: n.spin, coupling: Coupling::B { n: n_p }, v, j: j_p, m: m_p };
                        if let Ok(l) = label.validated() {
                            out.push(l);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Sum of angular factors over all final labels with `|Λ'| = lambda_abs`.
pub fn summed_angular_factor(n: &StateLabel, lambda_abs: i32, mu: i32) -> Result<BigRational, PolarError> {
    final_labels(n, lambda_abs, 0, mu)
        .iter()
        .try_fold(BigRational::zero(), |acc, np| Ok(acc + angular_factor(n, np, mu)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(text: &str) -> StateLabel {
        text.parse().unwrap()
    }

    #[test]
    fn case_a_selection_rules() {
        let n = a("a:L=0,S=1,Sigma=1,v=0,J=1,M=0");
        let other_sigma = a("a:L=0,S=1,Sigma=0,v=0,J=1,M=1");
        assert_eq!(line_strength_case_a(&n, &other_sigma, 1, 1.0).unwrap(), 0.0);
        let wrong_m = a("a:L=0,S=1,Sigma=1,v=0,J=1,M=0");
        assert_eq!(line_strength_case_a(&n, &wrong_m, 1, 1.0).unwrap(), 0.0);
        let ok = a("a:L=1,S=1,Sigma=1,v=0,J=2,M=1");
        assert!(line_strength_case_a(&n, &ok, 1, 1.0).unwrap() < 0.0);
        assert!(line_strength_case_a(&n, &a("a:L=1,S=1,Sigma=1,v=0,J=2,M=0"), 0, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn case_mismatch_reported() {
        let na = a("a:L=0,S=1,Sigma=1,v=0,J=1,M=0");
        let nb = a("b:L=0,S=1,N=0,v=0,J=1,M=0");
        assert!(matches!(line_strength_case_a(&na, &nb, 0, 1.0), Err(PolarError::CaseMismatch)));
        assert!(matches!(line_strength_case_b(&na, &nb, 0, 1.0), Err(PolarError::CaseMismatch)));
        assert!(matches!(line_strength_case_a(&na, &na, 2, 1.0), Err(PolarError::InvalidComponent(2))));
    }

    #[test]
    fn case_b_spin_change_forbidden() {
        let n = a("b:L=0,S=1,N=0,v=0,J=1,M=0");
        let np = a("b:L=0,S=0,N=1,v=0,J=1,M=0");
        assert_eq!(line_strength_case_b(&n, &np, 0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn n0_sums_are_isotropic() {
        // parallel and perpendicular channels in a 1:2 combination give a
        // μ-independent |strength|
        let n = a("b:L=0,S=1,N=0,v=0,J=1,M=0");
        let totals: Vec<f64> = (-1..=1)
            .map(|mu| {
                let par: f64 = rational_to(&summed_angular_factor(&n, 0, mu).unwrap());
                let perp: f64 = rational_to(&summed_angular_factor(&n, 1, mu).unwrap());
                (par + perp).abs()
            })
            .collect();
        assert!((totals[0] - totals[1]).abs() < 1e-12 && (totals[1] - totals[2]).abs() < 1e-12);
        let par: f64 = rational_to(&summed_angular_factor(&n, 0, 0).unwrap());
        let perp: f64 = rational_to(&summed_angular_factor(&n, 1, 0).unwrap());
        assert!((perp - 2.0 * par).abs() < 1e-12);
    }
}
