//! Guided-mode optics, molecular polarisabilities and optical trap analysis
//! for a diatomic molecule held near a silica nanofibre.
//!
//! Numerical kernels are generic over [`scalar::Real`] (`f32` or `f64`);
//! the `*F64` aliases below name the double-precision instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod casimir;
pub mod coords;
pub mod fibre_modes;
pub mod grid;
pub mod molecular_structure;
pub mod polarisability;
pub mod scalar;
pub mod special_math;
pub mod trap;
pub mod units;

pub use scalar::Real;

pub type FibreGeometryF64 = fibre_modes::FibreGeometry<f64>;
pub type ModeSolutionF64 = fibre_modes::ModeSolution<f64>;
pub type GuidedModeF64 = fibre_modes::GuidedMode<f64>;
pub type GuidedModeF32 = fibre_modes::GuidedMode<f32>;
