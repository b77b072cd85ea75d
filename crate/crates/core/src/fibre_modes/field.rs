use num_complex::Complex;

use crate::coords::Cylindrical;
use crate::scalar::{lit, Real};
use crate::special_math::bessel_k012;

use super::{GuidedMode, ModeError};

/// Positive-frequency electric field at one point, Cartesian components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample<T> {
    pub ex: Complex<T>,
    pub ey: Complex<T>,
    pub ez: Complex<T>,
}

impl<T: Real> FieldSample<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { ex: z, ey: z, ez: z }
    }

    pub fn components(&self) -> [Complex<T>; 3] {
        [self.ex, self.ey, self.ez]
    }

    /// `(|E_X|², |E_Y|², |E_Z|²)`.
    pub fn squared_components(&self) -> [T; 3] {
        [self.ex.norm_sqr(), self.ey.norm_sqr(), self.ez.norm_sqr()]
    }

    pub fn intensity(&self) -> T {
        self.squared_components().into_iter().sum()
    }

    pub fn norm(&self) -> T {
        self.intensity().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl<T: Real> std::ops::Add for FieldSample<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self { ex: self.ex + rhs.ex, ey: self.ey + rhs.ey, ez: self.ez + rhs.ez }
    }
}

/// Radial profile pieces shared by both field forms at `R > a`.
struct Exterior<T> {
    prefactor: T,
    transverse_x: T,
    transverse_y: T,
    longitudinal: T,
}

fn exterior<T: Real>(mode: &GuidedMode<T>, at: Cylindrical<T>) -> Result<Exterior<T>, ModeError> {
    let sol = &mode.solution;
    let a = sol.geometry.radius;
    if !(at.r > a) {
        return Err(ModeError::InsideFibre { r: at.r.as_f64(), radius: a.as_f64() });
    }
    let [k0, k1, k2] = bessel_k012(sol.q * at.r);
    let one = T::one();
    let two = lit::<T>(2.0);
    let s = sol.s;
    let (sin2, cos2) = (two * at.theta).sin_cos();
    Ok(Exterior {
        prefactor: mode.amplitude * sol.matching_ratio(),
        transverse_x: (one - s) * k0 + (one + s) * k2 * cos2,
        transverse_y: (one + s) * k2 * sin2,
        longitudinal: two * sol.q / sol.beta * k1 * at.theta.cos(),
    })
}

impl<T: Real> GuidedMode<T> {
    /// Quasi-linearly X-polarised travelling HE₁₁ field outside the fibre.
    pub fn travelling_field(&self, at: Cylindrical<T>) -> Result<FieldSample<T>, ModeError> {
        let e = exterior(self, at)?;
        let f: T = self.direction.sign();
        let phase = Complex::from_polar(T::one(), f * self.solution.beta * at.z);
        // i·C·e^{ifβZ}
        let common = Complex::new(T::zero(), e.prefactor) * phase;
        Ok(FieldSample {
            ex: common * e.transverse_x,
            ey: common * e.transverse_y,
            ez: common * Complex::new(T::zero(), -f * e.longitudinal),
        })
    }

    /// Standing wave from two counter-propagating copies of this mode with
    /// equal amplitude; transverse antinode at `Z = 0`.
    pub fn standing_field(&self, at: Cylindrical<T>) -> Result<FieldSample<T>, ModeError> {
        let e = exterior(self, at)?;
        let (sin_bz, cos_bz) = (self.solution.beta * at.z).sin_cos();
        let common = Complex::new(T::zero(), lit::<T>(2.0) * e.prefactor);
        Ok(FieldSample {
            ex: common * (e.transverse_x * cos_bz),
            ey: common * (e.transverse_y * cos_bz),
            ez: common * (e.longitudinal * sin_bz),
        })
    }
}
