use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::Cartesian;
use crate::grid::{AxisSpec, Grid2};
use crate::scalar::Real;

use super::{FieldSample, GuidedMode, ModeError};

/// Sampling plane for maps, coordinates in units of the fibre radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Plane<T> {
    /// Transverse plane at fixed `Z` (bohr).
    Xy { z: T },
    /// Longitudinal plane at fixed `Y` (units of `a`); second axis is `Z/a`.
    Xz { y: T },
}

impl<T: Real> Plane<T> {
    pub fn labels(&self) -> (&'static str, &'static str) {
        match self {
            Plane::Xy { .. } => ("X_over_a", "Y_over_a"),
            Plane::Xz { .. } => ("X_over_a", "Z_over_a"),
        }
    }

    /// Cartesian point in bohr for grid coordinates `(u, v)` in units of `a`.
    pub fn point(&self, u: T, v: T, a: T) -> Cartesian<T> {
        match *self {
            Plane::Xy { z } => Cartesian::new(u * a, v * a, z),
            Plane::Xz { y } => Cartesian::new(u * a, y * a, v * a),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum FieldChoice<'a, T> {
    Travelling(&'a GuidedMode<T>),
    Standing(&'a GuidedMode<T>),
}

impl<T: Real> FieldChoice<'_, T> {
    fn mode(&self) -> &GuidedMode<T> {
        match self {
            FieldChoice::Travelling(m) | FieldChoice::Standing(m) => m,
        }
    }

    fn eval(&self, at: Cartesian<T>) -> Result<FieldSample<T>, ModeError> {
        match self {
            FieldChoice::Travelling(m) => m.travelling_field(at.to_cylindrical()),
            FieldChoice::Standing(m) => m.standing_field(at.to_cylindrical()),
        }
    }
}

/// `|E|²` on a rectangular grid; points with `R ≤ a` are masked.
pub fn intensity_map<T: Real>(field: FieldChoice<'_, T>, plane: Plane<T>, u: AxisSpec<T>, v: AxisSpec<T>) -> Grid2<T> {
    let a = field.mode().radius();
    let us = u.values();
    let vs = v.values();
    let nv = vs.len();
    let values = (0..us.len() * nv)
        .into_par_iter()
        .map(|k| field.eval(plane.point(us[k / nv], vs[k % nv], a)).ok().map(|e| e.intensity()))
        .collect();
    let (u_label, v_label) = plane.labels();
    Grid2 {
        u_label: u_label.into(),
        v_label: v_label.into(),
        value_label: "intensity_au".into(),
        u: us,
        v: vs,
        values,
    }
}
