use std::fmt::Write as _;

use nanotrap::molecular_structure::{
    solve_vibrational, solve_vibrational_fn, ElectronicCurve, ElectronicLabel, MolecularData, Parity, SolverConfig,
    StructureError,
};
use nanotrap::special_math::HalfInteger;

fn label(name: &str, lambda: i32) -> ElectronicLabel {
    ElectronicLabel { name: name.into(), lambda, spin: HalfInteger::ONE, parity: Some(Parity::Ungerade), index: 1 }
}

fn config(r_min: f64, r_max: f64, step: f64, mu: f64) -> SolverConfig<f64> {
    SolverConfig { r_min, r_max, step, reduced_mass: mu, centrifugal: false, check_convergence: true }
}

struct Morse {
    depth: f64,
    alpha: f64,
    r_e: f64,
    mu: f64,
}

impl Morse {
    fn potential(&self, r: f64) -> f64 {
        self.depth * (1.0 - (-self.alpha * (r - self.r_e)).exp()).powi(2)
    }

    /// `ω(v+½) − ω²(v+½)²/(4D)`, `ω = α√(2D/μ)`.
    fn level(&self, v: usize) -> f64 {
        let omega = self.alpha * (2.0 * self.depth / self.mu).sqrt();
        let x = v as f64 + 0.5;
        omega * x - omega * omega * x * x / (4.0 * self.depth)
    }
}

#[test]
fn morse_levels_match_closed_form() {
    let m = Morse { depth: 0.02, alpha: 0.7, r_e: 8.0, mu: 5000.0 };
    let states =
        solve_vibrational_fn(&label("x", 0), |r| m.potential(r), HalfInteger::ZERO, 12, &config(5.5, 25.0, 0.025, m.mu)).unwrap();
    for s in &states {
        let exact = m.level(s.v);
        assert!(((s.energy - exact) / exact).abs() < 1e-7, "v={}: {} vs {exact}", s.v, s.energy);
        assert_eq!(s.node_count(), s.v);
    }
}

#[test]
fn hellmann_feynman_slope() {
    let base = |r: f64| 0.5 * 0.01 * (r - 8.0).powi(2);
    let perturbation = |r: f64| 1e-3 * (r - 8.0).powi(2) + 1e-4 * (r - 8.0).powi(3);
    let cfg = config(4.0, 12.0, 0.02, 2000.0);
    let energies = |lam: f64| -> Vec<f64> {
        solve_vibrational_fn(&label("x", 0), |r| base(r) + lam * perturbation(r), HalfInteger::ZERO, 4, &cfg)
            .unwrap()
            .into_iter()
            .map(|s| s.energy)
            .collect()
    };
    let h = 1e-4;
    let (plus, minus) = (energies(h), energies(-h));
    let states = solve_vibrational_fn(&label("x", 0), base, HalfInteger::ZERO, 4, &cfg).unwrap();
    for s in &states {
        let expectation: f64 =
            s.grid.points().zip(&s.wavefunction).map(|(r, x)| x * x * perturbation(r)).sum::<f64>() * s.grid.step;
        let slope = (plus[s.v] - minus[s.v]) / (2.0 * h);
        assert!((slope - expectation).abs() < 1e-7 * expectation.abs().max(1e-6), "v={}: {slope} vs {expectation}", s.v);
    }
}

#[test]
fn tabulated_curve_tracks_analytic() {
    let m = Morse { depth: 0.02, alpha: 0.7, r_e: 8.0, mu: 5000.0 };
    let grid: Vec<f64> = (0..600).map(|i| 5.0 + 0.05 * i as f64).collect();
    let energies = grid.iter().map(|r| m.potential(*r)).collect();
    let curve = ElectronicCurve::new(label("x", 0), grid, energies).unwrap();
    let cfg = config(5.5, 25.0, 0.025, m.mu);
    let states = solve_vibrational(&curve, HalfInteger::ZERO, 10, &cfg).unwrap();
    for s in &states {
        assert!(((s.energy - m.level(s.v)) / m.level(s.v)).abs() < 1e-5);
    }
    let outside = config(1.0, 30.0, 0.02, m.mu);
    assert!(matches!(solve_vibrational(&curve, HalfInteger::ZERO, 1, &outside), Err(StructureError::InvalidConfig(_))));
}

#[test]
fn step_refinement_converges() {
    let m = Morse { depth: 0.02, alpha: 0.7, r_e: 8.0, mu: 5000.0 };
    let e = |step: f64| {
        solve_vibrational_fn(&label("x", 0), |r| m.potential(r), HalfInteger::ZERO, 1, &config(5.5, 20.0, step, m.mu))
            .unwrap()[0]
            .energy
    };
    assert!((e(0.04) - e(0.02)).abs() < 1e-8);
    let coarse = solve_vibrational_fn(&label("x", 0), |r| m.potential(r), HalfInteger::ZERO, 1, &config(5.5, 20.0, 0.4, m.mu));
    assert!(matches!(coarse, Err(StructureError::GridTooCoarse { .. })));
}

fn write_table(path: &std::path::Path, header: &str, f: impl Fn(f64) -> f64) {
    let mut text = format!("# {header}\n");
    for i in 0..500 {
        let r = 4.0 + 0.04 * i as f64;
        writeln!(text, "{r} {}", f(r)).unwrap();
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn manifest_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let morse = |d: f64, a: f64, re: f64, t: f64| move |r: f64| t + d * (1.0 - (-a * (r - re)).exp()).powi(2);
    write_table(&dir.path().join("x.dat"), "units: R=bohr V=hartree", morse(0.01, 0.6, 10.0, 0.0));
    write_table(&dir.path().join("s.dat"), "units: R=bohr V=hartree", morse(0.02, 0.5, 10.5, 0.05));
    write_table(&dir.path().join("p.dat"), "units: R=bohr V=hartree", morse(0.03, 0.5, 9.5, 0.06));
    write_table(&dir.path().join("ds.dat"), "units: R=bohr d=au", |r| 3.0 + 0.1 * (r - 10.0));
    write_table(&dir.path().join("dp.dat"), "units: R=bohr d=au", |_| 2.0);
    let manifest = "\
curve.x.file = x.dat
curve.x.lambda = 0
curve.x.spin = 1
curve.x.parity = u
curve.s.file = s.dat
curve.s.lambda = 0
curve.s.spin = 1
curve.p.file = p.dat
curve.p.lambda = 1
curve.p.spin = 1
dipole.xs.file = ds.dat
dipole.xs.from = x
dipole.xs.to = s
dipole.xp.file = dp.dat
dipole.xp.from = x
dipole.xp.to = p
initial = x
grid.r_min = 6.5
grid.r_max = 23.0
grid.step = 0.03
states_per_curve = 40
";
    let path = dir.path().join("molecule.ini");
    std::fs::write(&path, manifest).unwrap();
    let data = MolecularData::load(&path).unwrap();
    assert_eq!(data.curves.len(), 3);
    let (initial, table) = data.transitions(0, HalfInteger::ONE).unwrap();
    assert_eq!(initial.v, 0);
    assert!(table.windows(2).all(|w| w[0].omega <= w[1].omega));
    assert!(table.iter().any(|e| e.lambda == 0) && table.iter().any(|e| e.lambda == 1));
    // closure over the excited manifold: Σ|⟨0|d|v'⟩|² → ⟨0|d²|0⟩
    let perp: f64 = table.iter().filter(|e| e.lambda == 1).map(|e| e.dipole * e.dipole).sum();
    assert!((perp - 4.0).abs() < 1e-3, "{perp}");

    let broken = manifest.replace("initial = x", "initial = y");
    std::fs::write(&path, broken).unwrap();
    match MolecularData::load(&path) {
        Err(StructureError::Parse { line, .. }) => assert_eq!(line, 17),
        other => panic!("{other:?}"),
    }
}
