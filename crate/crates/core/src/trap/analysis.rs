use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};
use crate::units;

use super::{
    count_bound_states, find_minimum, harmonic_fit, lobe_extent, tunneling_estimate, StatePolarisability,
    TrapConfiguration, TrapError, Tunnelling, WeylGrid,
};

pub const DEFAULT_BOUNDARY_MK: f64 = -3.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    /// Energy boundary `E_b` for the state count and lobe extents.
    pub boundary_mk: f64,
    pub weyl: WeylGrid,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self { boundary_mk: DEFAULT_BOUNDARY_MK, weyl: WeylGrid::default() }
    }
}

/// Trap characterisation for one state. Field names carry their units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapAnalysis<T> {
    pub state: String,
    pub r_min_bohr: T,
    pub r_min_over_a: T,
    pub r_min_nm: T,
    pub surface_distance_nm: T,
    pub theta_min_rad: T,
    pub z_min_nm: T,
    pub u_min_mk: T,
    /// Distance (units of `a`) between the ray minimum and the 3D optimum.
    pub refinement_offset_over_a: T,
    pub spring_mk_per_a2: [T; 3],
    pub hbar_omega_uk: [T; 3],
    pub zero_point_uk: T,
    pub boundary_mk: T,
    pub depth_uk: T,
    pub bound_count: u64,
    pub bound_count_estimate: T,
    pub bound_count_converged: bool,
    /// `None` when the boundary lies below the minimum.
    pub extents_over_a: Option<[T; 3]>,
    /// At the harmonic ground level; `None` if that lies above the barrier.
    pub tunnelling: Option<Tunnelling<T>>,
    pub standing_period_nm: T,
}

/// Minimum, harmonic fit, lobe extents, state count and tunnelling check.
pub fn analyze<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    settings: &AnalysisSettings,
) -> Result<TrapAnalysis<T>, TrapError> {
    let a = config.radius();
    let minimum = find_minimum(config, state)?;
    let fit = harmonic_fit(config, state, &minimum)?;
    let e_b = units::millikelvin_to_hartree::<T>(lit(settings.boundary_mk));
    let extents = match lobe_extent(config, state, &minimum, e_b) {
        Ok(x) => Some(x),
        Err(TrapError::BoundaryBelowMinimum { boundary_mk, minimum_mk }) => {
            log::warn!("{}: boundary {boundary_mk} mK lies below the minimum {minimum_mk} mK; no bound region", state.name);
            None
        }
        Err(e) => return Err(e),
    };
    let count = count_bound_states(config, state, &minimum, e_b, &settings.weyl);
    let zero_point = fit.zero_point_au(config.mass);
    let tunnelling = match tunneling_estimate(config, state, &minimum, minimum.u_au + zero_point) {
        Ok(t) => Some(t),
        Err(TrapError::AboveBarrier { energy_mk, barrier_mk }) => {
            log::warn!("{}: ground level {energy_mk} mK above the inter-lobe barrier {barrier_mk} mK", state.name);
            None
        }
        Err(e) => return Err(e),
    };
    let refined = minimum.refined;
    let ray = minimum.position().to_cartesian();
    let offset = ((refined.x - ray.x).powi(2) + (refined.y - ray.y).powi(2) + (refined.z - ray.z).powi(2)).sqrt();
    Ok(TrapAnalysis {
        state: state.name.clone(),
        r_min_bohr: minimum.r,
        r_min_over_a: minimum.r / a,
        r_min_nm: units::bohr_to_nm(minimum.r),
        surface_distance_nm: units::bohr_to_nm(minimum.r - a),
        theta_min_rad: minimum.theta,
        z_min_nm: units::bohr_to_nm(minimum.z),
        u_min_mk: minimum.u_mk(),
        refinement_offset_over_a: offset / a,
        spring_mk_per_a2: fit.spring_mk_per_a2,
        hbar_omega_uk: fit.hbar_omega_uk,
        zero_point_uk: units::hartree_to_microkelvin(zero_point),
        boundary_mk: lit(settings.boundary_mk),
        depth_uk: units::hartree_to_microkelvin(e_b - minimum.u_au),
        bound_count: count.count.round().to_u64().unwrap_or(0),
        bound_count_estimate: count.count,
        bound_count_converged: count.converged,
        extents_over_a: extents,
        tunnelling,
        standing_period_nm: units::bohr_to_nm(config.period()),
    })
}
