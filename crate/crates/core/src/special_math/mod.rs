//! Special functions and angular-momentum coefficients.

mod angular;
mod bessel;

pub use angular::{
    clebsch_gordan, clebsch_gordan_exact, rational_to, triangle, wigner_3j, wigner_3j_exact, wigner_6j,
    wigner_6j_exact, AngularCoefficient, HalfInteger,
};
pub use bessel::{bessel_j, bessel_j012, bessel_j_prime, bessel_k, bessel_k012, bessel_k_prime};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MathError {
    #[error("Bessel order {0} not supported (orders 0..=2 only)")]
    UnsupportedOrder(u32),
    #[error("{function}: argument {argument} outside the domain")]
    Domain { function: &'static str, argument: f64 },
    #[error("invalid angular momentum: {0}")]
    InvalidAngularMomentum(String),
}
