//! Physical constants (CODATA 2018) and the unit conversions used at API
//! boundaries. Everything internal is in Hartree atomic units
//! (ħ = e = mₑ = 4πε₀ = 1).

use crate::scalar::Real;

/// Bohr radius in nanometres.
pub const BOHR_NM: f64 = 0.052_917_721_090_3;
/// Bohr radius in ångström.
pub const BOHR_ANGSTROM: f64 = 0.529_177_210_903;
/// Hartree energy in kelvin (E_h / k_B).
pub const HARTREE_KELVIN: f64 = 3.157_750_248_040_7e5;
/// Hartree energy in cm⁻¹ (E_h / hc).
pub const HARTREE_WAVENUMBER: f64 = 2.194_746_313_632_0e5;
/// Speed of light in atomic units (1/α).
pub const SPEED_OF_LIGHT_AU: f64 = 137.035_999_084;
/// Unified atomic mass unit in electron masses.
pub const DALTON_ELECTRON_MASSES: f64 = 1_822.888_486_209;
/// Mass of ⁸⁷Rb in daltons.
pub const RB87_MASS_DALTON: f64 = 86.909_180;
/// Mass of ⁸⁵Rb in daltons.
pub const RB85_MASS_DALTON: f64 = 84.911_789_738;

/// The value taken for μ₀c in the guided-mode power formula.
///
/// The tabulated laser powers of the reference configuration are recovered
/// with the numerical value of the SI vacuum impedance (ohms) while the fibre
/// radius and field amplitude stay in atomic units. The same number is used
/// for every mode so power and amplitude remain in one fixed ratio.
pub const POWER_IMPEDANCE: f64 = 376.730_313_668;

pub fn nm_to_bohr<T: Real>(nm: T) -> T {
    nm / T::lit(BOHR_NM)
}

pub fn bohr_to_nm<T: Real>(bohr: T) -> T {
    bohr * T::lit(BOHR_NM)
}

pub fn angstrom_to_bohr<T: Real>(angstrom: T) -> T {
    angstrom / T::lit(BOHR_ANGSTROM)
}

/// Spectroscopic wavenumber (cm⁻¹) to angular frequency / energy (hartree).
pub fn wavenumber_to_hartree<T: Real>(wavenumber: T) -> T {
    wavenumber / T::lit(HARTREE_WAVENUMBER)
}

pub fn hartree_to_wavenumber<T: Real>(energy: T) -> T {
    energy * T::lit(HARTREE_WAVENUMBER)
}

/// Vacuum wavevector k₀ = ω/c in bohr⁻¹ for a wavenumber in cm⁻¹.
pub fn wavenumber_to_k0<T: Real>(wavenumber: T) -> T {
    wavenumber_to_hartree(wavenumber) / T::lit(SPEED_OF_LIGHT_AU)
}

pub fn hartree_to_millikelvin<T: Real>(energy: T) -> T {
    energy * T::lit(HARTREE_KELVIN * 1e3)
}

pub fn millikelvin_to_hartree<T: Real>(mk: T) -> T {
    mk / T::lit(HARTREE_KELVIN * 1e3)
}

pub fn hartree_to_microkelvin<T: Real>(energy: T) -> T {
    energy * T::lit(HARTREE_KELVIN * 1e6)
}

pub fn microkelvin_to_hartree<T: Real>(uk: T) -> T {
    uk / T::lit(HARTREE_KELVIN * 1e6)
}

pub fn dalton_to_electron_masses<T: Real>(dalton: T) -> T {
    dalton * T::lit(DALTON_ELECTRON_MASSES)
}

/// Rubidium isotopes the molecule can be built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RubidiumIsotope {
    Rb85,
    Rb87,
}

impl RubidiumIsotope {
    pub fn atomic_mass_dalton(self) -> f64 {
        match self {
            Self::Rb85 => RB85_MASS_DALTON,
            Self::Rb87 => RB87_MASS_DALTON,
        }
    }

    /// Total mass of the homonuclear dimer in electron masses.
    pub fn dimer_mass<T: Real>(self) -> T {
        dalton_to_electron_masses(T::lit(2.0 * self.atomic_mass_dalton()))
    }

    /// Reduced mass of the homonuclear dimer in electron masses.
    pub fn dimer_reduced_mass<T: Real>(self) -> T {
        dalton_to_electron_masses(T::lit(0.5 * self.atomic_mass_dalton()))
    }

    pub fn mass_number(self) -> u32 {
        match self {
            Self::Rb85 => 85,
            Self::Rb87 => 87,
        }
    }

    pub fn from_mass_number(a: u32) -> Option<Self> {
        match a {
            85 => Some(Self::Rb85),
            87 => Some(Self::Rb87),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vacuum_wavevector_matches_reference_table() {
        let a = nm_to_bohr(200.0_f64);
        assert!((wavenumber_to_k0(14319.0) * a - 1.79938).abs() < 1e-5);
        assert!((wavenumber_to_k0(9244.0) * a - 1.16164).abs() < 1e-5);
    }

    #[test]
    fn dimer_masses() {
        let m: f64 = RubidiumIsotope::Rb87.dimer_mass();
        let mu: f64 = RubidiumIsotope::Rb87.dimer_reduced_mass();
        assert!((m / mu - 4.0).abs() < 1e-14);
        assert_eq!(RubidiumIsotope::from_mass_number(85), Some(RubidiumIsotope::Rb85));
        assert_eq!(RubidiumIsotope::from_mass_number(86), None);
    }

    proptest! {
        #[test]
        fn conversions_round_trip(x in 1e-6f64..1e6) {
            let rel = |a: f64, b: f64| ((a - b) / b).abs();
            prop_assert!(rel(bohr_to_nm(nm_to_bohr(x)), x) < 1e-12);
            prop_assert!(rel(hartree_to_wavenumber(wavenumber_to_hartree(x)), x) < 1e-12);
            prop_assert!(rel(hartree_to_millikelvin(millikelvin_to_hartree(x)), x) < 1e-12);
            prop_assert!(rel(hartree_to_microkelvin(microkelvin_to_hartree(x)), x) < 1e-12);
        }
    }
}
