#![allow(dead_code)]

pub mod oracles;

use nanotrap::fibre_modes::{solve_propagation_constant, Direction, FibreGeometry};
use nanotrap::molecular_structure::TransitionEntry;
use nanotrap::polarisability::{alignment_analytic, PolarisabilityTensor, StateLabel};
use nanotrap::special_math::HalfInteger;
use nanotrap::trap::{StatePolarisability, TrapConfiguration};
use nanotrap::units::{self, RubidiumIsotope};

pub const RADIUS_NM: f64 = 200.0;
pub const N_CORE: f64 = 1.45;
pub const N_CORE_TABLE: f64 = 1.4469;
pub const WAVENUMBER_1: f64 = 14319.0;
pub const WAVENUMBER_2: f64 = 9244.0;
pub const AMPLITUDE_1: f64 = 2.54951e-6;
pub const AMPLITUDE_2: f64 = 8e-7;

pub const SCALAR: [f64; 2] = [-3000.92, 2998.83];
pub const PARALLEL: [f64; 2] = [-1034.53, 6804.32];
pub const PERPENDICULAR: [f64; 2] = [-3984.11, 1096.07];

pub fn geometry(n_core: f64) -> FibreGeometry<f64> {
    FibreGeometry::from_nm(RADIUS_NM, n_core, 1.0).unwrap()
}

pub fn config_with_core(n_core: f64) -> TrapConfiguration<f64> {
    let g = geometry(n_core);
    let m1 = solve_propagation_constant(&g, WAVENUMBER_1).unwrap().with_amplitude(AMPLITUDE_1, Direction::Forward);
    let m2 = solve_propagation_constant(&g, WAVENUMBER_2).unwrap().with_amplitude(AMPLITUDE_2, Direction::Forward);
    TrapConfiguration::new(m1, m2, RubidiumIsotope::Rb87.dimer_mass()).unwrap()
}

pub fn config() -> TrapConfiguration<f64> {
    config_with_core(N_CORE)
}

pub fn label(text: &str) -> StateLabel {
    text.parse().unwrap()
}

pub fn case_b(config: &TrapConfiguration<f64>, m: i32) -> StatePolarisability<f64> {
    let state = label(&format!("b:L=0,S=1,N=0,v=0,J=1,M={m}"));
    let t1 = PolarisabilityTensor::from_scalar(WAVENUMBER_1, Some(state), SCALAR[0]);
    let t2 = PolarisabilityTensor::from_scalar(WAVENUMBER_2, Some(state), SCALAR[1]);
    StatePolarisability::for_configuration(state.to_string(), t1, t2, config).unwrap()
}

/// Case (a) state built from the tabulated parallel/perpendicular pair.
pub fn case_a(config: &TrapConfiguration<f64>, m: i32, sigma: i32) -> StatePolarisability<f64> {
    let state = label(&format!("a:L=0,S=1,Sigma={sigma},v=0,J=1,M={m}"));
    let a = alignment_analytic::<f64>(&state).unwrap();
    let t1 = PolarisabilityTensor::from_parallel_perpendicular(WAVENUMBER_1, Some(state), PARALLEL[0], PERPENDICULAR[0], a);
    let t2 = PolarisabilityTensor::from_parallel_perpendicular(WAVENUMBER_2, Some(state), PARALLEL[1], PERPENDICULAR[1], a);
    StatePolarisability::for_configuration(state.to_string(), t1, t2, config).unwrap()
}

pub fn entry(cm: f64, dipole: f64, lambda: i32, v: usize) -> TransitionEntry<f64> {
    TransitionEntry {
        omega: units::wavenumber_to_hartree(cm),
        dipole,
        curve: format!("L{lambda}"),
        lambda,
        spin: HalfInteger::ONE,
        v,
    }
}

/// Synthetic ladder of parallel and perpendicular transitions.
pub fn synthetic_table() -> Vec<TransitionEntry<f64>> {
    let mut t = Vec::new();
    for v in 0..6 {
        t.push(entry(10_800.0 + 90.0 * v as f64, 2.0 / (1.0 + v as f64), 0, v));
        t.push(entry(12_600.0 + 75.0 * v as f64, 3.0 / (1.0 + v as f64), 1, v));
    }
    t
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn within_factor(x: f64, target: f64, factor: f64) -> bool {
    x >= target / factor && x <= target * factor
}
