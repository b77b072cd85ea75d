use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::molecular_structure::TransitionEntry;
use crate::scalar::{lit, Real};
use crate::special_math::rational_to;
use crate::units;

use super::strength::summed_angular_factor;
use super::{alignment_analytic, PolarError, StateLabel};

/// Default half-width of the resonance guard band, cm⁻¹.
pub const DEFAULT_GUARD_CM: f64 = 1.0;

/// Dynamic polarisability of one state at one frequency, atomic units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarisabilityTensor<T> {
    /// Wavenumber in cm⁻¹.
    pub frequency: T,
    pub state: Option<StateLabel>,
    /// `α_{μν}` indexed by `[μ + 1][ν + 1]`.
    pub spherical: [[T; 3]; 3],
    /// `(α_XX, α_YY, α_ZZ)`.
    pub cartesian: [T; 3],
    pub scalar: T,
    pub parallel: Option<T>,
    pub perpendicular: Option<T>,
    /// `(a_X, a_Y, a_Z)`.
    pub alignment: [T; 3],
}

fn spherical_from_cartesian<T: Real>(c: [T; 3]) -> [[T; 3]; 3] {
    // α_XX = α_YY is assumed; the pair components carry their mean
    let transverse = -(c[0] + c[1]) * lit(0.5);
    let z = T::zero();
    [[z, z, transverse], [z, c[2], z], [transverse, z, z]]
}

impl<T: Real> PolarisabilityTensor<T> {
    /// Builds the derived fields from the three non-zero spherical components.
    pub fn from_spherical(
        frequency: T,
        state: Option<StateLabel>,
        spherical: [[T; 3]; 3],
        alignment: [T; 3],
    ) -> Self {
        let a_pm = spherical[2][0];
        let a_mp = spherical[0][2];
        let transverse = -(a_pm + a_mp) * lit(0.5);
        let cartesian = [transverse, transverse, spherical[1][1]];
        let scalar = (-a_pm + spherical[1][1] - a_mp) / lit(3.0);
        Self { frequency, state, spherical, cartesian, scalar, parallel: None, perpendicular: None, alignment }
    }

    /// `α_ii = a_i α_∥ + (1 − a_i) α_⊥`.
    pub fn from_parallel_perpendicular(
        frequency: T,
        state: Option<StateLabel>,
        parallel: T,
        perpendicular: T,
        alignment: [T; 3],
    ) -> Self {
        let cartesian = alignment.map(|a| a * parallel + (T::one() - a) * perpendicular);
        Self {
            frequency,
            state,
            spherical: spherical_from_cartesian(cartesian),
            cartesian,
            scalar: cartesian.iter().copied().sum::<T>() / lit(3.0),
            parallel: Some(parallel),
            perpendicular: Some(perpendicular),
            alignment,
        }
    }

    pub fn from_cartesian(frequency: T, state: StateLabel, cartesian: [T; 3]) -> Result<Self, PolarError> {
        Ok(Self {
            frequency,
            state: Some(state),
            spherical: spherical_from_cartesian(cartesian),
            cartesian,
            scalar: cartesian.iter().copied().sum::<T>() / lit(3.0),
            parallel: None,
            perpendicular: None,
            alignment: alignment_analytic(&state)?,
        })
    }

    /// Isotropic tensor `α_ii = α_sc`.
    pub fn from_scalar(frequency: T, state: Option<StateLabel>, scalar: T) -> Self {
        let third = T::one() / lit(3.0);
        Self {
            frequency,
            state,
            spherical: spherical_from_cartesian([scalar; 3]),
            cartesian: [scalar; 3],
            scalar,
            parallel: None,
            perpendicular: None,
            alignment: [third; 3],
        }
    }

    /// `a_i = (α_ii − α_⊥)/(α_∥ − α_⊥)`, when both parts are known and differ.
    pub fn extracted_alignment(&self) -> Option<[T; 3]> {
        let (par, perp) = (self.parallel?, self.perpendicular?);
        let span = par - perp;
        if span == T::zero() {
            return None;
        }
        Some(self.cartesian.map(|c| (c - perp) / span))
    }

    /// Largest spherical component outside the `ν = −μ` pairs.
    pub fn off_pair_magnitude(&self) -> T {
        let mut worst = T::zero();
        for mu in 0..3 {
            for nu in 0..3 {
                if mu + nu != 2 {
                    worst = worst.max(self.spherical[mu][nu].abs());
                }
            }
        }
        worst
    }
}

/// A transition close to the evaluation frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub curve: String,
    pub v: usize,
    /// Transition wavenumber, cm⁻¹.
    pub transition_cm: f64,
    /// `ω_{n'n} − ω` in cm⁻¹.
    pub detuning_cm: f64,
}

/// The `count` transitions nearest to `wavenumber`, closest first.
pub fn nearest_resonances<T: Real>(transitions: &[TransitionEntry<T>], wavenumber: T, count: usize) -> Vec<Resonance> {
    let mut all: Vec<Resonance> = transitions
        .iter()
        .map(|t| {
            let cm = units::hartree_to_wavenumber(t.omega).as_f64();
            Resonance { curve: t.curve.clone(), v: t.v, transition_cm: cm, detuning_cm: cm - wavenumber.as_f64() }
        })
        .collect();
    all.sort_by(|a, b| a.detuning_cm.abs().total_cmp(&b.detuning_cm.abs()));
    all.truncate(count);
    all
}

/// Transitions within `guard_cm` of `wavenumber`.
pub fn resonance_warnings<T: Real>(transitions: &[TransitionEntry<T>], wavenumber: T, guard_cm: f64) -> Vec<Resonance> {
    nearest_resonances(transitions, wavenumber, transitions.len())
        .into_iter()
        .take_while(|r| r.detuning_cm.abs() <= guard_cm)
        .collect()
}

/// Sum over intermediate states of `2ω_{n'n}/(ω_{n'n}² − ω²)` times the line
/// strengths, for the `ν = −μ` pairs. Transitions to other spin manifolds
/// are skipped. Returns the tensor with parallel and perpendicular parts
/// filled.
pub fn polarisability_tensor<T: Real>(
    state: &StateLabel,
    wavenumber: T,
    transitions: &[TransitionEntry<T>],
    guard_cm: f64,
) -> Result<PolarisabilityTensor<T>, PolarError> {
    if !(wavenumber >= T::zero()) || !wavenumber.is_finite() {
        return Err(PolarError::InvalidFrequency(wavenumber.as_f64()));
    }
    for r in resonance_warnings(transitions, wavenumber, guard_cm) {
        log::warn!(
            "{wavenumber} cm^-1 lies {:+.3} cm^-1 from the {} v'={} transition at {:.3} cm^-1",
            r.detuning_cm,
            r.curve,
            r.v,
            r.transition_cm
        );
    }
    let omega = units::wavenumber_to_hartree(wavenumber);
    let lambda_abs = state.lambda.abs().as_integer().unwrap_or(0);
    let mut factors: BTreeMap<(i32, i32), T> = BTreeMap::new();
    let mut parallel = [T::zero(); 3];
    let mut perpendicular = [T::zero(); 3];
    for t in transitions.iter().filter(|t| t.spin == state.spin) {
        let resonance = lit::<T>(2.0) * t.omega / (t.omega * t.omega - omega * omega);
        let weight = resonance * t.dipole * t.dipole;
        for (k, mu) in (-1..=1).enumerate() {
            let factor = match factors.get(&(t.lambda, mu)) {
                Some(f) => *f,
                None => {
                    let f = rational_to::<T>(&summed_angular_factor(state, t.lambda, mu)?);
                    factors.insert((t.lambda, mu), f);
                    f
                }
            };
            if t.lambda == lambda_abs {
                parallel[k] = parallel[k] + weight * factor;
            } else {
                perpendicular[k] = perpendicular[k] + weight * factor;
            }
        }
    }
    let pairs = |v: [T; 3]| {
        let z = T::zero();
        [[z, z, v[0]], [z, v[1], z], [v[2], z, z]]
    };
    let total = [0, 1, 2].map(|k| parallel[k] + perpendicular[k]);
    let alignment = alignment_analytic(state)?;
    let mut tensor = PolarisabilityTensor::from_spherical(wavenumber, Some(*state), pairs(total), alignment);
    // Σ_i a_i = 1 and Σ_i (1 − a_i) = 2 fix the normalisation of each part
    let par = PolarisabilityTensor::from_spherical(wavenumber, None, pairs(parallel), alignment);
    let perp = PolarisabilityTensor::from_spherical(wavenumber, None, pairs(perpendicular), alignment);
    tensor.parallel = Some(par.cartesian.iter().copied().sum());
    tensor.perpendicular = Some(perp.cartesian.iter().copied().sum::<T>() * lit(0.5));
    Ok(tensor)
}

/// `(α_∥, α_⊥)` from the `ΔΛ = 0` and `|ΔΛ| = 1` transitions separately.
pub fn decompose_parallel_perp<T: Real>(
    state: &StateLabel,
    wavenumber: T,
    transitions: &[TransitionEntry<T>],
) -> Result<(T, T), PolarError> {
    let t = polarisability_tensor(state, wavenumber, transitions, DEFAULT_GUARD_CM)?;
    Ok((t.parallel.unwrap_or_else(T::zero), t.perpendicular.unwrap_or_else(T::zero)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_math::HalfInteger;

    fn entry(cm: f64, dipole: f64, lambda: i32, v: usize) -> TransitionEntry<f64> {
        TransitionEntry {
            omega: units::wavenumber_to_hartree(cm),
            dipole,
            curve: format!("L{lambda}"),
            lambda,
            spin: HalfInteger::ONE,
            v,
        }
    }

    fn table() -> Vec<TransitionEntry<f64>> {
        vec![entry(11000.0, 3.0, 0, 0), entry(11500.0, 2.0, 0, 1), entry(12500.0, 4.0, 1, 0), entry(13100.0, 1.5, 1, 1)]
    }

    fn label(text: &str) -> StateLabel {
        text.parse().unwrap()
    }

    #[test]
    fn single_static_term() {
        let one_hartree = units::hartree_to_wavenumber(1.0);
        let t = vec![entry(one_hartree, 1.0, 0, 0)];
        let tensor = polarisability_tensor(&label("b:L=0,S=1,N=0,v=0,J=1,M=0"), 0.0, &t, 1.0).unwrap();
        assert!((tensor.scalar - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn structural_invariants() {
        let states = [
            "a:L=0,S=1,Sigma=1,v=0,J=1,M=0",
            "a:L=0,S=1,Sigma=0,v=0,J=1,M=0",
            "a:L=0,S=1,Sigma=-1,v=0,J=1,M=1",
            "b:L=0,S=1,N=0,v=0,J=1,M=1",
            "b:L=0,S=1,N=2,v=0,J=2,M=1",
        ];
        for s in states {
            let state = label(s);
            for wn in [9244.0, 14319.0, 3000.0] {
                let t = polarisability_tensor(&state, wn, &table(), DEFAULT_GUARD_CM).unwrap();
                assert!(t.off_pair_magnitude() < 1e-12);
                let a = t.alignment;
                assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-10);
                let (par, perp) = (t.parallel.unwrap(), t.perpendicular.unwrap());
                for (i, ai) in a.iter().enumerate() {
                    let model = ai * par + (1.0 - ai) * perp;
                    assert!((model - t.cartesian[i]).abs() <= 1e-8 * t.cartesian[i].abs().max(1.0), "{s} {wn} {i}");
                }
                let trace = t.cartesian.iter().sum::<f64>() / 3.0;
                assert!((trace - t.scalar).abs() < 1e-10 * t.scalar.abs().max(1.0));
                let extracted = t.extracted_alignment().unwrap();
                for i in 0..3 {
                    assert!((extracted[i] - a[i]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn static_limit_positive_and_sign_flip() {
        let t = polarisability_tensor(&label("a:L=0,S=1,Sigma=1,v=0,J=1,M=0"), 100.0, &table(), 1.0).unwrap();
        assert!(t.cartesian.iter().all(|c| *c > 0.0));
        let lone = vec![entry(12000.0, 2.0, 0, 0)];
        let state = label("b:L=0,S=1,N=0,v=0,J=1,M=0");
        let below = polarisability_tensor(&state, 11990.0, &lone, 1.0).unwrap();
        let above = polarisability_tensor(&state, 12010.0, &lone, 1.0).unwrap();
        assert!(below.scalar > 0.0 && above.scalar < 0.0);
    }

    #[test]
    fn resonances_reported_nearest_first() {
        let near = nearest_resonances(&table(), 12400.0, 2);
        assert_eq!(near.len(), 2);
        assert_eq!(near[0].curve, "L1");
        assert!((near[0].detuning_cm - 100.0).abs() < 1e-6);
        assert!(resonance_warnings(&table(), 12400.0, 1.0).is_empty());
        assert_eq!(resonance_warnings(&table(), 12499.5, 1.0).len(), 1);
    }

    #[test]
    fn constructors_agree() {
        let state = label("a:L=0,S=1,Sigma=1,v=0,J=1,M=0");
        let a = alignment_analytic::<f64>(&state).unwrap();
        let t = PolarisabilityTensor::from_parallel_perpendicular(14319.0, Some(state), -1034.53, -3984.11, a);
        assert!((t.cartesian[2] - (-3394.20)).abs() <= 0.01 + 1e-9);
        let back = PolarisabilityTensor::from_cartesian(14319.0, state, t.cartesian).unwrap();
        let re = PolarisabilityTensor::from_spherical(14319.0, Some(state), back.spherical, back.alignment);
        for i in 0..3 {
            assert!((re.cartesian[i] - t.cartesian[i]).abs() < 1e-10);
        }
        assert!((re.scalar - t.scalar).abs() < 1e-10);
        let iso = PolarisabilityTensor::from_scalar(14319.0, None, -3000.92);
        assert_eq!(iso.cartesian, [-3000.92; 3]);
    }
}
