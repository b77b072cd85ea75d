use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::{Cartesian, Cylindrical};
use crate::grid::{AxisSpec, Cut1, Grid2};
use crate::scalar::{lit, Real};

use super::{potential, StatePolarisability, TrapConfiguration};

const VALUE_LABEL: &str = "U_mK";

/// Potential map plane; lengths in units of `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "plane", rename_all = "lowercase")]
pub enum PlaneSpec<T> {
    /// `Y = 0`; `Z` spans one standing-wave period centred on `Z = 0`.
    Xz { x: AxisSpec<T>, z_points: usize },
    /// `Z = 0`.
    Xy { x: AxisSpec<T>, y: AxisSpec<T> },
}

/// One-dimensional cut; lengths in units of `a`, angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cut", rename_all = "lowercase")]
pub enum CutSpec<T> {
    Radial { r: AxisSpec<T>, theta: T, z: T },
    Angular { theta: AxisSpec<T>, r: T, z: T },
    Axial { z: AxisSpec<T>, r: T, theta: T },
}

/// `U` in mK on a plane; points inside the fibre are masked.
pub fn export_plane<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    spec: &PlaneSpec<T>,
) -> Grid2<T> {
    let a = config.radius();
    let (u_label, v_label, u, v) = match *spec {
        PlaneSpec::Xz { x, z_points } => {
            let half = config.period() / a * lit(0.5);
            ("X_over_a", "Z_over_a", x, AxisSpec::new(-half, half, z_points))
        }
        PlaneSpec::Xy { x, y } => ("X_over_a", "Y_over_a", x, y),
    };
    let point = |p: T, q: T| match spec {
        PlaneSpec::Xz { .. } => Cartesian::new(p * a, T::zero(), q * a),
        PlaneSpec::Xy { .. } => Cartesian::new(p * a, q * a, T::zero()),
    };
    let us = u.values();
    let vs = v.values();
    let nv = vs.len();
    let values = (0..us.len() * nv)
        .into_par_iter()
        .map(|k| potential(config, state, point(us[k / nv], vs[k % nv]).to_cylindrical()).ok())
        .collect();
    Grid2 { u_label: u_label.into(), v_label: v_label.into(), value_label: VALUE_LABEL.into(), u: us, v: vs, values }
}

/// `U` in mK along a cut; points inside the fibre are masked.
pub fn export_cut<T: Real>(config: &TrapConfiguration<T>, state: &StatePolarisability<T>, spec: &CutSpec<T>) -> Cut1<T> {
    let a = config.radius();
    let (label, axis) = match spec {
        CutSpec::Radial { r, .. } => ("R_over_a", r),
        CutSpec::Angular { theta, .. } => ("Theta_rad", theta),
        CutSpec::Axial { z, .. } => ("Z_over_a", z),
    };
    let point = |s: T| match *spec {
        CutSpec::Radial { theta, z, .. } => Cylindrical::new(s * a, theta, z * a),
        CutSpec::Angular { r, z, .. } => Cylindrical::new(r * a, s, z * a),
        CutSpec::Axial { r, theta, .. } => Cylindrical::new(r * a, theta, s * a),
    };
    let x = axis.values();
    let values = x.par_iter().map(|s| potential(config, state, point(*s)).ok()).collect();
    Cut1 { x_label: label.into(), value_label: VALUE_LABEL.into(), x, values }
}
