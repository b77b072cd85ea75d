use serde::{Deserialize, Serialize};

use crate::coords::Cartesian;
use crate::scalar::{lit, Real};
use crate::units;

use super::{potential_cartesian_au, StatePolarisability, TrapConfiguration, TrapError, TrapMinimum};

const STEP_OVER_A: f64 = 1e-3;

/// Independent-oscillator approximation around a minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicFit<T> {
    /// `∂²U/∂x_i²` in hartree/bohr².
    pub spring_au: [T; 3],
    /// Same, in mK per `a²`.
    pub spring_mk_per_a2: [T; 3],
    /// `ħω_i = ħ√(k_i/m)` in μK.
    pub hbar_omega_uk: [T; 3],
}

impl<T: Real> HarmonicFit<T> {
    pub fn from_springs(spring_au: [T; 3], mass: T, radius: T) -> Self {
        Self {
            spring_au,
            spring_mk_per_a2: spring_au.map(|k| units::hartree_to_millikelvin(k * radius * radius)),
            hbar_omega_uk: spring_au.map(|k| units::hartree_to_microkelvin((k / mass).sqrt())),
        }
    }

    /// Zero-point energy `½ Σ ħω_i` in hartree.
    pub fn zero_point_au(&self, mass: T) -> T {
        self.spring_au.iter().map(|k| (*k / mass).sqrt()).sum::<T>() * lit(0.5)
    }
}

/// Diagonal second derivatives by central differences at steps `h` and `h/2`
/// combined by Richardson extrapolation.
pub fn hessian_diagonal<T: Real>(f: impl Fn([T; 3]) -> T, at: [T; 3], h: T) -> [T; 3] {
    let f0 = f(at);
    let second = |i: usize, step: T| {
        let mut plus = at;
        let mut minus = at;
        plus[i] = plus[i] + step;
        minus[i] = minus[i] - step;
        (f(plus) - lit::<T>(2.0) * f0 + f(minus)) / (step * step)
    };
    [0, 1, 2].map(|i| {
        let coarse = second(i, h);
        let fine = second(i, h * lit(0.5));
        (lit::<T>(4.0) * fine - coarse) / lit(3.0)
    })
}

/// Spring constants along `X`, `Y`, `Z` at `minimum` (which sits at `Θ = 0`,
/// so `X` is radial).
pub fn harmonic_fit<T: Real>(
    config: &TrapConfiguration<T>,
    state: &StatePolarisability<T>,
    minimum: &TrapMinimum<T>,
) -> Result<HarmonicFit<T>, TrapError> {
    let a = config.radius();
    let centre = minimum.position().to_cartesian();
    let f = |p: [T; 3]| potential_cartesian_au(config, state, Cartesian::new(p[0], p[1], p[2]));
    f([centre.x, centre.y, centre.z])?;
    let k = hessian_diagonal(|p| f(p).unwrap_or_else(|_| T::nan()), [centre.x, centre.y, centre.z], a * lit(STEP_OVER_A));
    let fit = HarmonicFit::from_springs(k, config.mass, a);
    if k.iter().any(|v| !(*v > T::zero())) {
        return Err(TrapError::NegativeCurvature(fit.spring_mk_per_a2.map(|v| v.as_f64())));
    }
    Ok(fit)
}
