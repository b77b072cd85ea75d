//! The HE₁₁ guided mode of a step-index nanofibre and its evanescent field.
//!
//! All quantities are in atomic units: lengths in bohr, `k₀ = ω/c` in
//! bohr⁻¹, field amplitudes in atomic units of electric field. Only the
//! exterior branch (`R > a`) of the field is implemented.

mod field;
mod intensity;
mod solver;

use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::units;

pub use field::FieldSample;
pub use intensity::{intensity_map, FieldChoice, Plane};
pub use solver::{characteristic_residual, solve_propagation_constant, RootScan};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModeError {
    #[error("invalid fibre geometry: {0}")]
    InvalidGeometry(String),
    #[error("no guided HE11 root at {wavenumber} cm^-1 (no sign change of the characteristic equation)")]
    NoGuidedMode { wavenumber: f64 },
    #[error("{} roots of the characteristic equation at {wavenumber} cm^-1 (single-mode regime expected): {roots:?}", roots.len())]
    MultipleRoots { wavenumber: f64, roots: Vec<f64> },
    #[error("point at R = {r} bohr lies inside the fibre (radius {radius} bohr)")]
    InsideFibre { r: f64, radius: f64 },
    #[error("power and amplitude must be positive and finite, got {0}")]
    InvalidPower(f64),
    #[error("wavenumber must be positive and finite, got {0}")]
    InvalidWavenumber(f64),
}

/// Step-index fibre: core radius and the two refractive indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FibreGeometry<T> {
    /// Core radius `a` in bohr.
    pub radius: T,
    /// Core index `n₁`.
    pub n_core: T,
    /// Cladding (surrounding medium) index `n₂`.
    pub n_clad: T,
}

impl<T: Real> FibreGeometry<T> {
    pub fn new(radius: T, n_core: T, n_clad: T) -> Result<Self, ModeError> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(ModeError::InvalidGeometry(format!("radius must be positive, got {radius}")));
        }
        if !(n_clad >= T::one()) || !(n_core > n_clad) || !n_core.is_finite() {
            return Err(ModeError::InvalidGeometry(format!(
                "indices must satisfy n1 > n2 >= 1, got n1 = {n_core}, n2 = {n_clad}"
            )));
        }
        Ok(Self { radius, n_core, n_clad })
    }

    pub fn from_nm(radius_nm: T, n_core: T, n_clad: T) -> Result<Self, ModeError> {
        Self::new(units::nm_to_bohr(radius_nm), n_core, n_clad)
    }
}

/// Propagation direction `f = ±1` along `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Self::Forward => T::one(),
            Self::Backward => -T::one(),
        }
    }
}

/// A solved HE₁₁ mode: propagation constant and transverse parameters, no
/// amplitude attached yet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution<T> {
    pub geometry: FibreGeometry<T>,
    /// Spectroscopic wavenumber in cm⁻¹.
    pub wavenumber: T,
    /// Vacuum wavevector in bohr⁻¹.
    pub k0: T,
    pub beta: T,
    pub h: T,
    pub q: T,
    pub s: T,
}

impl<T: Real> ModeSolution<T> {
    /// Angular frequency ω in hartree.
    pub fn omega(&self) -> T {
        units::wavenumber_to_hartree(self.wavenumber)
    }

    /// `hJ₁(ha) / (qK₁(qa))`, the factor matching the exterior field to the core.
    pub fn matching_ratio(&self) -> T {
        let a = self.geometry.radius;
        let [_, j1, _] = crate::special_math::bessel_j012(self.h * a);
        let [_, k1, _] = crate::special_math::bessel_k012(self.q * a);
        self.h * j1 / (self.q * k1)
    }

    /// Intensity period `π/β` of the standing wave built from this mode.
    pub fn standing_period(&self) -> T {
        T::PI() / self.beta
    }

    /// Power carried by one travelling beam of real amplitude `𝒜`.
    pub fn power_from_amplitude(&self, amplitude: T) -> T {
        amplitude * amplitude * self.power_per_unit_amplitude_sq()
    }

    pub fn amplitude_from_power(&self, power: T) -> Result<T, ModeError> {
        if !(power > T::zero()) || !power.is_finite() {
            return Err(ModeError::InvalidPower(power.as_f64()));
        }
        Ok((power / self.power_per_unit_amplitude_sq()).sqrt())
    }

    /// `Π / 𝒜²` from the closed-form integral of the Poynting vector over the
    /// core and the exterior.
    pub fn power_per_unit_amplitude_sq(&self) -> T {
        let a = self.geometry.radius;
        let (h, q, s, beta) = (self.h, self.q, self.s, self.beta);
        let (ha, qa) = (h * a, q * a);
        let [j0, j1, _] = crate::special_math::bessel_j012(ha);
        let [k0, k1, _] = crate::special_math::bessel_k012(qa);
        let one = T::one();
        let two = T::lit(2.0);
        let h2b = h * h / (beta * beta);
        let q2b = q * q / (beta * beta);

        let core = (one + s * s + h2b) * (j0 * j0 + j1 * j1)
            - two / (ha * ha) * (one + s) * (one + s + h2b) * j1 * j1;
        let ratio = h * j1 / (q * k1);
        let clad = (one + s * s - q2b) * (k1 * k1 - k0 * k0)
            + two / (qa * qa) * (one + s) * (one + s - q2b) * k1 * k1;
        let bracket = core + ratio * ratio * clad;

        T::lit(4.0) * T::PI() * a * a / T::lit(units::POWER_IMPEDANCE) * (beta / self.k0) * bracket
    }

    pub fn with_amplitude(self, amplitude: T, direction: Direction) -> GuidedMode<T> {
        GuidedMode { solution: self, amplitude, direction }
    }

    pub fn with_power(self, power: T, direction: Direction) -> Result<GuidedMode<T>, ModeError> {
        let amplitude = self.amplitude_from_power(power)?;
        Ok(self.with_amplitude(amplitude, direction))
    }
}

/// A solved mode carrying a definite amplitude and direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuidedMode<T> {
    pub solution: ModeSolution<T>,
    /// Real amplitude `𝒜` (atomic units of field).
    pub amplitude: T,
    pub direction: Direction,
}

impl<T: Real> GuidedMode<T> {
    pub fn power(&self) -> T {
        self.solution.power_from_amplitude(self.amplitude)
    }

    pub fn radius(&self) -> T {
        self.solution.geometry.radius
    }

    pub fn beta(&self) -> T {
        self.solution.beta
    }

    /// Same mode with every field scaled by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self { amplitude: self.amplitude * factor, ..*self }
    }

    pub fn reversed(&self) -> Self {
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        Self { direction, ..*self }
    }
}
