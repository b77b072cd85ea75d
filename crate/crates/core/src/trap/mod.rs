//! Two-colour optical potential around the fibre and its analysis.
//!
//! Positions are in bohr internally; energies are hartree internally and
//! reported in mK (potential) or μK (vibrational quanta).

mod analysis;
mod export;
mod harmonic;
mod minimum;
mod tunnelling;
mod weyl;

use serde::{Deserialize, Serialize};

use crate::coords::{Cartesian, Cylindrical};
use crate::fibre_modes::{GuidedMode, ModeError};
use crate::polarisability::PolarisabilityTensor;
use crate::scalar::{lit, Real};
use crate::units;

pub use analysis::{analyze, AnalysisSettings, TrapAnalysis, DEFAULT_BOUNDARY_MK};
pub use export::{export_cut, export_plane, CutSpec, PlaneSpec};
pub use harmonic::{harmonic_fit, hessian_diagonal, HarmonicFit};
pub use minimum::{find_minimum, golden_section, nelder_mead, TrapMinimum};
pub use tunnelling::{tunneling_estimate, wkb_exponent, Tunnelling};
pub use weyl::{count_bound_states, flood_fill_weyl, lobe_extent, WeylCount, WeylGrid};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrapError {
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error("invalid trap configuration: {0}")]
    InvalidConfiguration(String),
    #[error("no potential minimum on the ray Θ = 0, Z = 0 for R in ({lo}, {hi}) bohr")]
    NoMinimum { lo: f64, hi: f64, scan: Vec<(f64, f64)> },
    #[error("non-positive curvature k = {0:?} mK/a² at the candidate minimum")]
    NegativeCurvature([f64; 3]),
    #[error("energy {energy_mk} mK exceeds the barrier top {barrier_mk} mK along the path")]
    AboveBarrier { energy_mk: f64, barrier_mk: f64 },
    #[error("parallel/perpendicular polarisabilities missing for the {0} field")]
    MissingDecomposition(&'static str),
    #[error("boundary energy {boundary_mk} mK does not exceed the minimum {minimum_mk} mK")]
    BoundaryBelowMinimum { boundary_mk: f64, minimum_mk: f64 },
}

/// The two guided fields: travelling at `ω₁`, standing at `ω₂ < ω₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapConfiguration<T> {
    pub travelling: GuidedMode<T>,
    pub standing: GuidedMode<T>,
    /// Molecular mass in electron masses.
    pub mass: T,
}

impl<T: Real> TrapConfiguration<T> {
    pub fn new(travelling: GuidedMode<T>, standing: GuidedMode<T>, mass: T) -> Result<Self, TrapError> {
        if !(travelling.solution.wavenumber > standing.solution.wavenumber) {
            return Err(TrapError::InvalidConfiguration(format!(
                "travelling wavenumber {} must exceed standing wavenumber {}",
                travelling.solution.wavenumber, standing.solution.wavenumber
            )));
        }
        if travelling.solution.geometry != standing.solution.geometry {
            return Err(TrapError::InvalidConfiguration("both fields must belong to the same fibre".into()));
        }
        if !(mass > T::zero()) {
            return Err(TrapError::InvalidConfiguration("mass must be positive".into()));
        }
        Ok(Self { travelling, standing, mass })
    }

    pub fn radius(&self) -> T {
        self.travelling.radius()
    }

    /// Standing-wave intensity period `π/β₂` in bohr.
    pub fn period(&self) -> T {
        self.standing.solution.standing_period()
    }

    /// Both fields with amplitudes scaled by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self { travelling: self.travelling.scaled(factor), standing: self.standing.scaled(factor), ..*self }
    }
}

/// Polarisability tensors of one state at the two trap frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePolarisability<T> {
    pub name: String,
    pub travelling: PolarisabilityTensor<T>,
    pub standing: PolarisabilityTensor<T>,
}

impl<T: Real> StatePolarisability<T> {
    /// Checks that tensor frequencies match the mode frequencies exactly.
    pub fn for_configuration(
        name: impl Into<String>,
        travelling: PolarisabilityTensor<T>,
        standing: PolarisabilityTensor<T>,
        config: &TrapConfiguration<T>,
    ) -> Result<Self, TrapError> {
        let name = name.into();
        for (tensor, mode, which) in
            [(&travelling, &config.travelling, "travelling"), (&standing, &config.standing, "standing")]
        {
            if tensor.frequency != mode.solution.wavenumber {
                return Err(TrapError::InvalidConfiguration(format!(
                    "{name}: {which} tensor at {} cm^-1 but the field is at {} cm^-1",
                    tensor.frequency, mode.solution.wavenumber
                )));
            }
        }
        Ok(Self { name, travelling, standing })
    }

    pub fn alignment_z(&self) -> T {
        self.travelling.alignment[2]
    }
}

/// `|E|²` components of both fields at a point.
fn intensities<T: Real>(config: &TrapConfiguration<T>, at: Cylindrical<T>) -> Result<[[T; 3]; 2], ModeError> {
    Ok([
        config.travelling.travelling_field(at)?.squared_components(),
        config.standing.standing_field(at)?.squared_components(),
    ])
}

/// `U = −Σ_j Σ_i α_ii^{(j)} |E_{j,i}|²` in hartree.
pub fn potential_au<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    at: Cylindrical<T>,
) -> Result<T, TrapError> {
    let [e1, e2] = intensities(config, at)?;
    let a1 = state.travelling.cartesian;
    let a2 = state.standing.cartesian;
    let mut u = T::zero();
    for i in 0..3 {
        u = u - a1[i] * e1[i] - a2[i] * e2[i];
    }
    Ok(u)
}

/// Trap potential in mK.
pub fn potential<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    at: Cylindrical<T>,
) -> Result<T, TrapError> {
    potential_au(config, state, at).map(units::hartree_to_millikelvin)
}

pub(crate) fn potential_cartesian_au<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    at: Cartesian<T>,
) -> Result<T, TrapError> {
    potential_au(config, state, at.to_cylindrical())
}

/// `U = 𝒱 + a_Z 𝒲`, all energies in mK.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VwDecomposition<T> {
    pub v: T,
    pub w: T,
    pub a_z: T,
    pub u_check: T,
}

pub fn vw_decomposition<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    at: Cylindrical<T>,
) -> Result<VwDecomposition<T>, TrapError> {
    let parts = |t: &PolarisabilityTensor<T>, which| match (t.parallel, t.perpendicular) {
        (Some(p), Some(q)) => Ok((p, q)),
        _ => Err(TrapError::MissingDecomposition(which)),
    };
    let fields = intensities(config, at)?;
    let tensors = [parts(&state.travelling, "travelling")?, parts(&state.standing, "standing")?];
    let half = lit::<T>(0.5);
    let mut v = T::zero();
    let mut w = T::zero();
    for ((par, perp), e) in tensors.iter().zip(fields) {
        let total = e[0] + e[1] + e[2];
        v = v + half * ((*par - *perp) * e[2] - (*par + *perp) * total);
        w = w + half * (*par - *perp) * (total - lit::<T>(3.0) * e[2]);
    }
    let a_z = state.alignment_z();
    let mk = units::hartree_to_millikelvin::<T>;
    Ok(VwDecomposition { v: mk(v), w: mk(w), a_z, u_check: mk(v + a_z * w) })
}
