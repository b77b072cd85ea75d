//! Nonretarded Casimir–Polder shift of a molecule facing a dielectric
//! half-space whose normal is the `X` axis.

use serde::{Deserialize, Serialize};

use crate::molecular_structure::TransitionEntry;
use crate::scalar::{lit, Real};
use crate::units;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CasimirError {
    #[error("distance must be positive, got {0} nm")]
    InvalidDistance(f64),
    #[error("refractive index must exceed 1, got {0}")]
    InvalidIndex(f64),
    #[error("squared dipole moments must be finite and non-negative (term {0})")]
    InvalidMoment(usize),
}

/// Surface distance, medium index and `(|d_X|², |d_Y|², |d_Z|²)` per
/// transition in atomic units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasimirInput<T> {
    pub distance_nm: T,
    pub refractive_index: T,
    pub dipole_terms: Vec<[T; 3]>,
}

impl<T: Real> CasimirInput<T> {
    pub fn new(distance_nm: T, refractive_index: T, dipole_terms: Vec<[T; 3]>) -> Result<Self, CasimirError> {
        if !(distance_nm > T::zero()) {
            return Err(CasimirError::InvalidDistance(distance_nm.as_f64()));
        }
        if !(refractive_index > T::one()) {
            return Err(CasimirError::InvalidIndex(refractive_index.as_f64()));
        }
        if let Some(k) = dipole_terms.iter().position(|t| t.iter().any(|d| !(d.is_finite() && *d >= T::zero()))) {
            return Err(CasimirError::InvalidMoment(k));
        }
        Ok(Self { distance_nm, refractive_index, dipole_terms })
    }

    /// A single transition with the same moment `|⟨d_i⟩|` on every axis.
    pub fn effective(distance_nm: T, refractive_index: T, moment: T) -> Result<Self, CasimirError> {
        Self::new(distance_nm, refractive_index, vec![[moment * moment; 3]])
    }

    /// Every entry of a transition table, each `d²` spread evenly over the
    /// three axes (isotropic orientation average).
    pub fn from_transitions(
        distance_nm: T,
        refractive_index: T,
        table: &[TransitionEntry<T>],
    ) -> Result<Self, CasimirError> {
        let third = T::one() / lit(3.0);
        Self::new(distance_nm, refractive_index, table.iter().map(|e| [e.dipole * e.dipole * third; 3]).collect())
    }

    pub fn with_distance(&self, distance_nm: T) -> Result<Self, CasimirError> {
        Self::new(distance_nm, self.refractive_index, self.dipole_terms.clone())
    }
}

/// `δE = −(1/16D³)(n²−1)/(n²+1) Σ (|d_Y|² + |d_Z|² + 2|d_X|²)` in hartree.
pub fn cp_shift_au<T: Real>(input: &CasimirInput<T>) -> T {
    let d = units::nm_to_bohr(input.distance_nm);
    let n2 = input.refractive_index * input.refractive_index;
    let contrast = (n2 - T::one()) / (n2 + T::one());
    let moments = input
        .dipole_terms
        .iter()
        .map(|[x, y, z]| *y + *z + lit::<T>(2.0) * *x)
        .fold(T::zero(), |acc, v| acc + v);
    -contrast * moments / (lit::<T>(16.0) * d * d * d)
}

/// Shift in μK.
pub fn cp_shift<T: Real>(input: &CasimirInput<T>) -> T {
    units::hartree_to_microkelvin(cp_shift_au(input))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_estimate_is_a_few_microkelvin() {
        let shift = cp_shift(&CasimirInput::<f64>::effective(200.0, 1.45, 4.0).unwrap());
        assert!(shift < 0.0);
        assert!(shift.abs() > 3.0 && shift.abs() < 12.0, "{shift}");
    }

    #[test]
    fn inverse_cube_law() {
        let near = CasimirInput::<f64>::new(150.0, 1.45, vec![[1.0, 2.0, 3.0], [0.5, 0.0, 0.1]]).unwrap();
        let far = near.with_distance(300.0).unwrap();
        assert!((cp_shift(&near) / cp_shift(&far) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn normal_axis_weighted_twice() {
        let normal = cp_shift(&CasimirInput::<f64>::new(200.0, 1.45, vec![[1.0, 0.0, 0.0]]).unwrap());
        let tangential = cp_shift(&CasimirInput::<f64>::new(200.0, 1.45, vec![[0.0, 1.0, 0.0]]).unwrap());
        assert!((normal / tangential - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_moments_and_validation() {
        assert_eq!(cp_shift(&CasimirInput::new(200.0, 1.45, vec![[0.0; 3]]).unwrap()), 0.0);
        assert!(CasimirInput::effective(-1.0, 1.45, 4.0).is_err());
        assert!(CasimirInput::effective(200.0, 1.0, 4.0).is_err());
        assert!(CasimirInput::new(200.0, 1.45, vec![[-1.0, 0.0, 0.0]]).is_err());
    }
}
