//! Dynamic polarisability tensors of Hund's case (a) and (b) molecular
//! states from a sum over intermediate rovibronic states.
//!
//! Atomic units throughout (`ħ = 1`); frequencies enter in cm⁻¹.

mod alignment;
mod state;
mod strength;
mod tensor;

pub use alignment::{alignment_analytic, alignment_z_exact, case_b_weights, symmetric_top_cos2};
pub use state::{Coupling, StateLabel};
pub use strength::{
    angular_factor, angular_factor_case_a, angular_factor_case_b, final_labels, line_strength_case_a,
    line_strength_case_b, summed_angular_factor,
};
pub use tensor::{
    decompose_parallel_perp, nearest_resonances, polarisability_tensor, resonance_warnings, PolarisabilityTensor,
    Resonance, DEFAULT_GUARD_CM,
};

use crate::special_math::MathError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolarError {
    #[error("invalid state label: {0}")]
    InvalidState(String),
    #[error("initial and final labels use different Hund's cases")]
    CaseMismatch,
    #[error("spherical component must be -1, 0 or 1, got {0}")]
    InvalidComponent(i32),
    #[error("frequency must be finite and non-negative, got {0} cm^-1")]
    InvalidFrequency(f64),
    #[error(transparent)]
    Math(#[from] MathError),
}
