//! Tabulated electronic curves, transition-dipole functions and the
//! rovibrational states solved on them.
//!
//! Distances are in bohr, energies in hartree, dipoles in atomic units.

mod io;
mod spline;
mod transitions;
mod vibrational;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::special_math::HalfInteger;

pub use io::{parse_table, MolecularData, TableKind};
pub use spline::CubicSpline;
pub use transitions::{transition_dipole_me, transition_table, TransitionEntry};
pub use vibrational::{solve_vibrational, solve_vibrational_fn, RadialGrid, RovibState, SolverConfig};

const MIN_CURVE_POINTS: usize = 100;
const PLATEAU_FRACTION: f64 = 0.05;
const PLATEAU_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StructureError {
    #[error("{source_name}:{line}: {message}")]
    Parse { source_name: String, line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid curve {name}: {message}")]
    InvalidCurve { name: String, message: String },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("ground-state energy moved by {change:.3e} hartree on grid refinement (limit 1e-8); reduce the step")]
    GridTooCoarse { change: f64 },
    #[error("{fraction:.3e} of the wavefunction norm lies outside the dipole data range [{lo}, {hi}] bohr")]
    Coverage { fraction: f64, lo: f64, hi: f64 },
    #[error("unknown electronic curve {0:?}")]
    UnknownCurve(String),
    #[error("symmetric eigen-solve failed: {0}")]
    Eigen(String),
}

/// `g`/`u` inversion symmetry of a homonuclear electronic state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Gerade,
    Ungerade,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Gerade => "g",
            Parity::Ungerade => "u",
        })
    }
}

/// Electronic state label such as `(1)³Σ⁺_u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElectronicLabel {
    /// Manifest key naming the curve.
    pub name: String,
    /// `|Λ|`, projection of electronic orbital momentum on the axis.
    pub lambda: i32,
    pub spin: HalfInteger,
    pub parity: Option<Parity>,
    /// Index `n` in `(n)`, counting states of equal symmetry.
    pub index: u32,
}

impl fmt::Display for ElectronicLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.lambda {
            0 => "Sigma".to_string(),
            1 => "Pi".to_string(),
            2 => "Delta".to_string(),
            l => format!("Lambda{l}"),
        };
        let mult = self.spin.twice_value() + 1;
        write!(f, "({}){mult}{letter}", self.index)?;
        if let Some(p) = self.parity {
            write!(f, "_{p}")?;
        }
        Ok(())
    }
}

/// Potential energy curve on an ascending grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronicCurve<T> {
    pub label: ElectronicLabel,
    pub grid: Vec<T>,
    pub energies: Vec<T>,
}

impl<T: Real> ElectronicCurve<T> {
    pub fn new(label: ElectronicLabel, grid: Vec<T>, energies: Vec<T>) -> Result<Self, StructureError> {
        let fail = |message: String| StructureError::InvalidCurve { name: label.name.clone(), message };
        if grid.len() != energies.len() {
            return Err(fail(format!("{} distances but {} energies", grid.len(), energies.len())));
        }
        if grid.len() < MIN_CURVE_POINTS {
            return Err(fail(format!("{} points, at least {MIN_CURVE_POINTS} required", grid.len())));
        }
        if let Some(k) = grid.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(fail(format!("grid not strictly ascending at point {}", k + 1)));
        }
        if energies.iter().chain(&grid).any(|v| !v.is_finite()) {
            return Err(fail("non-finite entry".into()));
        }
        let curve = Self { label, grid, energies };
        if let Some(spread) = curve.plateau_spread() {
            if spread > PLATEAU_TOLERANCE {
                log::warn!(
                    "curve {}: last {}% of points vary by {spread:.2e} hartree; dissociation plateau not reached",
                    curve.label.name,
                    PLATEAU_FRACTION * 100.0
                );
            }
        }
        Ok(curve)
    }

    /// Spread of `V` over the outermost 5% of the grid.
    pub fn plateau_spread(&self) -> Option<f64> {
        let n = self.energies.len();
        let tail = ((n as f64 * PLATEAU_FRACTION).ceil() as usize).max(2);
        let slice = &self.energies[n.saturating_sub(tail)..];
        let lo = slice.iter().map(|v| v.as_f64()).fold(f64::INFINITY, f64::min);
        let hi = slice.iter().map(|v| v.as_f64()).fold(f64::NEG_INFINITY, f64::max);
        (hi >= lo).then_some(hi - lo)
    }

    pub fn minimum(&self) -> T {
        self.energies.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn spline(&self) -> CubicSpline<T> {
        CubicSpline::natural(self.grid.clone(), self.energies.clone()).expect("validated grid")
    }
}

/// Body-fixed transition dipole `d(R)` between two electronic states.
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleFunction<T> {
    pub from: String,
    pub to: String,
    /// Spherical index `m = Λ − Λ'` (sign fixed by the |Λ| labels: 0 or 1).
    pub component: i32,
    pub grid: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Real> DipoleFunction<T> {
    pub fn new(
        from: &ElectronicLabel,
        to: &ElectronicLabel,
        grid: Vec<T>,
        values: Vec<T>,
    ) -> Result<Self, StructureError> {
        let component = (from.lambda - to.lambda).abs();
        let name = format!("{}->{}", from.name, to.name);
        if component > 1 {
            return Err(StructureError::InvalidCurve {
                name,
                message: format!("|ΔΛ| = {component} is not dipole-allowed"),
            });
        }
        if grid.len() != values.len() || grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(StructureError::InvalidCurve { name, message: "grid must be ascending and match values".into() });
        }
        Ok(Self { from: from.name.clone(), to: to.name.clone(), component, grid, values })
    }

    pub fn is_parallel(&self) -> bool {
        self.component == 0
    }

    /// Whether this function couples the two named curves, in either order.
    pub fn connects(&self, a: &str, b: &str) -> bool {
        (self.from == a && self.to == b) || (self.from == b && self.to == a)
    }

    pub fn range(&self) -> (T, T) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    pub fn spline(&self) -> CubicSpline<T> {
        CubicSpline::natural(self.grid.clone(), self.values.clone()).expect("validated grid")
    }
}
