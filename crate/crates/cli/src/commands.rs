//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use nanotrap::casimir::{cp_shift, CasimirInput};
use nanotrap::fibre_modes::{solve_propagation_constant, Direction, FibreGeometry, GuidedMode, ModeError};
use nanotrap::grid::{fmt_num, AxisSpec};
use nanotrap::molecular_structure::{MolecularData, StructureError, TransitionEntry};
use nanotrap::polarisability::{
    alignment_analytic, polarisability_tensor, resonance_warnings, PolarError, PolarisabilityTensor, Resonance, StateLabel,
};
use nanotrap::trap::{
    analyze, export_cut, export_plane, find_minimum, AnalysisSettings, CutSpec, PlaneSpec, StatePolarisability, TrapAnalysis,
    TrapConfiguration, TrapError,
};
use nanotrap::units;
use serde::Serialize;

use crate::config::{ConfigError, LaserConfig, PolarSource, RunConfig, Strength, TableEntry};
use crate::output::{emit, state_tag, to_json, write_file, Meta, Report};

/// A failure of the numerics rather than of the input.
#[derive(Debug, thiserror::Error)]
#[error(transparent)]
pub struct Numerical(pub Box<dyn std::error::Error + Send + Sync>);

fn numerical<E: std::error::Error + Send + Sync + 'static>(e: E) -> anyhow::Error {
    anyhow::Error::new(Numerical(Box::new(e)))
}

fn mode_error(e: ModeError) -> anyhow::Error {
    match e {
        ModeError::InvalidGeometry(_) | ModeError::InvalidPower(_) | ModeError::InvalidWavenumber(_) => {
            ConfigError::Invalid(e.to_string()).into()
        }
        other => numerical(other),
    }
}

fn structure_error(e: StructureError) -> anyhow::Error {
    match e {
        StructureError::Parse { .. } | StructureError::Io { .. } | StructureError::UnknownCurve(_) => {
            ConfigError::Invalid(e.to_string()).into()
        }
        other => numerical(other),
    }
}

fn polar_error(e: PolarError) -> anyhow::Error {
    match e {
        PolarError::InvalidState(_) | PolarError::InvalidFrequency(_) | PolarError::CaseMismatch => {
            ConfigError::Invalid(e.to_string()).into()
        }
        other => numerical(other),
    }
}

fn trap_error(e: TrapError) -> anyhow::Error {
    match e {
        TrapError::Mode(m) => mode_error(m),
        TrapError::InvalidConfiguration(_) | TrapError::BoundaryBelowMinimum { .. } => ConfigError::Invalid(e.to_string()).into(),
        other => numerical(other),
    }
}

fn state_label(text: &str) -> anyhow::Result<StateLabel> {
    text.parse::<StateLabel>().map_err(polar_error)
}

const ROLES: [&str; 2] = ["travelling", "standing"];

fn lasers(config: &RunConfig) -> [&LaserConfig; 2] {
    [&config.travelling, &config.standing]
}

pub fn guided_modes(config: &RunConfig) -> anyhow::Result<[GuidedMode<f64>; 2]> {
    let f = &config.fibre;
    let geometry = FibreGeometry::from_nm(f.radius_nm, f.n_core, f.n_clad).map_err(mode_error)?;
    let build = |laser: &LaserConfig| -> anyhow::Result<GuidedMode<f64>> {
        let solution = solve_propagation_constant(&geometry, laser.wavenumber_cm).map_err(mode_error)?;
        match laser.strength {
            Strength::AmplitudeAu(a) => Ok(solution.with_amplitude(a, Direction::Forward)),
            Strength::PowerAu(p) => solution.with_power(p, Direction::Forward).map_err(mode_error),
        }
    };
    Ok([build(&config.travelling)?, build(&config.standing)?])
}

pub fn trap_configuration(config: &RunConfig) -> anyhow::Result<TrapConfiguration<f64>> {
    let [travelling, standing] = guided_modes(config)?;
    TrapConfiguration::new(travelling, standing, config.isotope().dimer_mass()).map_err(trap_error)
}

#[derive(Serialize)]
struct LaserReport {
    role: &'static str,
    wavenumber_cm: f64,
    ka: f64,
    beta_a: f64,
    h_a: f64,
    q_a: f64,
    s: f64,
    amplitude_au: f64,
    power_au: f64,
    standing_period_nm: f64,
}

#[derive(Serialize)]
struct ModeBody {
    radius_nm: f64,
    n_core: f64,
    n_clad: f64,
    lasers: Vec<LaserReport>,
}

pub fn mode(config: &RunConfig, out: Option<&Path>) -> anyhow::Result<()> {
    let modes = guided_modes(config)?;
    let lasers = ROLES
        .iter()
        .zip(&modes)
        .map(|(role, m)| {
            let s = &m.solution;
            let a = s.geometry.radius;
            LaserReport {
                role,
                wavenumber_cm: s.wavenumber,
                ka: s.k0 * a,
                beta_a: s.beta * a,
                h_a: s.h * a,
                q_a: s.q * a,
                s: s.s,
                amplitude_au: m.amplitude,
                power_au: m.power(),
                standing_period_nm: units::bohr_to_nm(s.standing_period()),
            }
        })
        .collect();
    let f = &config.fibre;
    let body = ModeBody { radius_nm: f.radius_nm, n_core: f.n_core, n_clad: f.n_clad, lasers };
    let report = Report { meta: Meta::new(config, "lengths dimensionless (times a); amplitude and power in atomic units"), body };
    emit(&to_json(&report)?, out, "mode.json")?;
    Ok(())
}

/// Transition table for `state` from the configured manifest.
fn transitions(config: &RunConfig, state: &StateLabel) -> anyhow::Result<Vec<TransitionEntry<f64>>> {
    let path = config.manifest.as_ref().ok_or_else(|| ConfigError::MissingKey {
        section: "molecule".into(),
        key: "manifest".into(),
    })?;
    let data = MolecularData::load(path).map_err(structure_error)?;
    let (_, table) = data.transitions(state.v, state.j).map_err(structure_error)?;
    Ok(table)
}

fn tabulated(config: &RunConfig, state: &StateLabel, role: usize, wavenumber: f64) -> anyhow::Result<PolarisabilityTensor<f64>> {
    let pair = config.table_for(&state.to_string())?;
    let entry = if role == 0 { pair.travelling } else { pair.standing };
    Ok(match entry {
        TableEntry::ParallelPerpendicular { parallel, perpendicular } => {
            let alignment = alignment_analytic(state).map_err(polar_error)?;
            PolarisabilityTensor::from_parallel_perpendicular(wavenumber, Some(*state), parallel, perpendicular, alignment)
        }
        TableEntry::Cartesian(values) => PolarisabilityTensor::from_cartesian(wavenumber, *state, values).map_err(polar_error)?,
        TableEntry::Scalar(x) => PolarisabilityTensor::from_scalar(wavenumber, Some(*state), x),
    })
}

/// Tensors of `state` at the travelling and standing frequencies.
fn laser_tensors(config: &RunConfig, state: &StateLabel) -> anyhow::Result<[PolarisabilityTensor<f64>; 2]> {
    let [t, s] = lasers(config).map(|l| l.wavenumber_cm);
    match config.polarisability {
        PolarSource::Table => Ok([tabulated(config, state, 0, t)?, tabulated(config, state, 1, s)?]),
        PolarSource::Computed => {
            let table = transitions(config, state)?;
            let compute = |wn| polarisability_tensor(state, wn, &table, config.guard_cm).map_err(polar_error);
            Ok([compute(t)?, compute(s)?])
        }
    }
}

fn state_polarisability(
    config: &RunConfig,
    trap: &TrapConfiguration<f64>,
    label: &str,
) -> anyhow::Result<StatePolarisability<f64>> {
    let state = state_label(label)?;
    let [t, s] = laser_tensors(config, &state)?;
    StatePolarisability::for_configuration(label.to_string(), t, s, trap).map_err(trap_error)
}

#[derive(Serialize)]
struct TensorReport {
    role: &'static str,
    wavenumber_cm: f64,
    tensor: PolarisabilityTensor<f64>,
    resonance_warnings: Vec<Resonance>,
}

#[derive(Serialize)]
struct PolarBody {
    source: PolarSource,
    state: String,
    tensors: Vec<TensorReport>,
}

#[derive(Debug, Clone, Copy)]
pub struct Scan {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Scan {
    fn points(&self) -> anyhow::Result<Vec<f64>> {
        if !(self.step > 0.0 && self.hi > self.lo && self.lo >= 0.0) || ![self.lo, self.hi, self.step].iter().all(|x| x.is_finite()) {
            return Err(ConfigError::Invalid(format!(
                "scan needs 0 <= lo < hi and step > 0, got {} {} {}",
                self.lo, self.hi, self.step
            ))
            .into());
        }
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| self.lo + self.step * i as f64).collect())
    }
}

pub fn polar(config: &RunConfig, scan: Option<Scan>, wavenumber: Option<f64>, out: Option<&Path>) -> anyhow::Result<()> {
    for label in &config.states {
        let state = state_label(label)?;
        if let Some(scan) = scan {
            polar_scan(config, &state, scan, out)?;
            continue;
        }
        let computed = match config.polarisability {
            PolarSource::Computed => Some(transitions(config, &state)?),
            PolarSource::Table => None,
        };
        let targets: Vec<(&'static str, f64)> = match wavenumber {
            None => ROLES.iter().copied().zip(lasers(config).map(|l| l.wavenumber_cm)).collect(),
            Some(w) => vec![("requested", w)],
        };
        let mut tensors = Vec::new();
        for (role, wn) in targets {
            let (tensor, warnings) = match &computed {
                Some(table) => (
                    polarisability_tensor(&state, wn, table, config.guard_cm).map_err(polar_error)?,
                    resonance_warnings(table, wn, config.guard_cm),
                ),
                None => {
                    let index = lasers(config).iter().position(|l| l.wavenumber_cm == wn).ok_or_else(|| {
                        ConfigError::Invalid(format!("tabulated polarisabilities exist only at the laser wavenumbers, not {wn} cm^-1"))
                    })?;
                    (tabulated(config, &state, index, wn)?, Vec::new())
                }
            };
            tensors.push(TensorReport { role, wavenumber_cm: wn, tensor, resonance_warnings: warnings });
        }
        let body = PolarBody { source: config.polarisability, state: label.clone(), tensors };
        let report = Report { meta: Meta::new(config, "polarisability in atomic units; wavenumbers in cm^-1"), body };
        emit(&to_json(&report)?, out, &format!("polar_{}.json", state_tag(label)))?;
    }
    Ok(())
}

fn polar_scan(config: &RunConfig, state: &StateLabel, scan: Scan, out: Option<&Path>) -> anyhow::Result<()> {
    if config.polarisability != PolarSource::Computed {
        return Err(ConfigError::Invalid("--scan needs polarisability = computed and a manifest".into()).into());
    }
    let points = scan.points()?;
    let table = transitions(config, state)?;
    let meta = Meta::new(config, "wavenumber in cm^-1; polarisability in atomic units");
    let mut csv = String::new();
    for line in meta.csv_header(&[format!("state: {state}"), "scalar polarisability scan".into()]) {
        writeln!(csv, "# {line}")?;
    }
    writeln!(csv, "# columns: wavenumber_cm, alpha_sc_au, alpha_par_au, alpha_perp_au")?;
    for wn in points {
        for r in resonance_warnings(&table, wn, config.guard_cm) {
            writeln!(
                csv,
                "# warning: {} cm^-1 is {:+.3} cm^-1 from {} v'={} at {:.3} cm^-1",
                fmt_num(wn),
                r.detuning_cm,
                r.curve,
                r.v,
                r.transition_cm
            )?;
        }
        let t = polarisability_tensor(state, wn, &table, config.guard_cm).map_err(polar_error)?;
        writeln!(
            csv,
            "{},{},{},{}",
            fmt_num(wn),
            fmt_num(t.scalar),
            fmt_num(t.parallel.unwrap_or(f64::NAN)),
            fmt_num(t.perpendicular.unwrap_or(f64::NAN))
        )?;
    }
    emit(&csv, out, &format!("polar_scan_{}.csv", state_tag(&state.to_string())))?;
    Ok(())
}

#[derive(Serialize)]
struct AnalyzeBody {
    boundary_mk: f64,
    states: Vec<TrapAnalysis<f64>>,
}

fn report_no_minimum(e: &TrapError) {
    if let TrapError::NoMinimum { scan, .. } = e {
        eprintln!("# U(R) along Theta = 0, Z = 0 scanned while searching for the minimum");
        eprintln!("# columns: R_bohr, U_hartree");
        for (r, u) in scan {
            eprintln!("{},{}", fmt_num(*r), fmt_num(*u));
        }
    }
}

pub fn trap_analyze(config: &RunConfig, out: Option<&Path>) -> anyhow::Result<()> {
    let trap = trap_configuration(config)?;
    let settings = AnalysisSettings { boundary_mk: config.trap.boundary_mk, ..AnalysisSettings::default() };
    let mut states = Vec::new();
    for label in &config.states {
        let state = state_polarisability(config, &trap, label)?;
        let analysis = analyze(&trap, &state, &settings).map_err(|e| {
            report_no_minimum(&e);
            trap_error(e)
        })?;
        states.push(analysis);
    }
    let body = AnalyzeBody { boundary_mk: config.trap.boundary_mk, states };
    let report = Report { meta: Meta::new(config, "field names carry their units; a is the fibre radius"), body };
    emit(&to_json(&report)?, out, "trap_analysis.json")?;
    Ok(())
}

#[derive(Serialize)]
struct GridBody {
    files: Vec<PathBuf>,
}

pub fn trap_grid(config: &RunConfig, out: &Path) -> anyhow::Result<()> {
    let trap = trap_configuration(config)?;
    let a = trap.radius();
    let t = &config.trap;
    let [x_lo, x_hi] = t.x_range_over_a;
    let x_axis = AxisSpec::new(x_lo, x_hi, t.plane_points);
    let meta = Meta::new(config, "lengths in units of the fibre radius a; angles in rad; potential in mK");
    let mut files = Vec::new();
    for label in &config.states {
        let state = state_polarisability(config, &trap, label)?;
        let minimum = find_minimum(&trap, &state).map_err(|e| {
            report_no_minimum(&e);
            trap_error(e)
        })?;
        let r_min = minimum.r / a;
        let period = trap.period() / a;
        let planes = [
            ("plane_xz", PlaneSpec::Xz { x: x_axis, z_points: t.plane_points }, "Y = 0; Z spans one standing-wave period"),
            (
                "plane_xy",
                PlaneSpec::Xy { x: x_axis, y: AxisSpec::new(-t.y_half_over_a, t.y_half_over_a, t.plane_points) },
                "Z = 0",
            ),
        ];
        for (name, spec, note) in planes {
            let grid = export_plane(&trap, &state, &spec);
            let mut bytes = Vec::new();
            grid.write_csv(&mut bytes, &meta.csv_header(&[format!("state: {label}"), note.into()]))?;
            files.push(write_file(out, &format!("{}_{name}.csv", state_tag(label)), &bytes)?);
        }
        let pi = std::f64::consts::PI;
        let cuts = [
            ("cut_radial", CutSpec::Radial { r: AxisSpec::new(1.0, x_hi.max(1.0 + 1e-3), t.cut_points), theta: 0.0, z: 0.0 }, "Theta = 0, Z = 0".to_string()),
            (
                "cut_angular",
                CutSpec::Angular { theta: AxisSpec::new(-pi, pi, t.cut_points), r: r_min, z: 0.0 },
                format!("R = R_min = {} a, Z = 0", fmt_num(r_min)),
            ),
            (
                "cut_axial",
                CutSpec::Axial { z: AxisSpec::new(-period, period, t.cut_points), r: r_min, theta: 0.0 },
                format!("R = R_min = {} a, Theta = 0", fmt_num(r_min)),
            ),
        ];
        for (name, spec, note) in cuts {
            let cut = export_cut(&trap, &state, &spec);
            let mut bytes = Vec::new();
            cut.write_csv(&mut bytes, &meta.csv_header(&[format!("state: {label}"), note]))?;
            files.push(write_file(out, &format!("{}_{name}.csv", state_tag(label)), &bytes)?);
        }
    }
    let report = Report { meta, body: GridBody { files } };
    print!("{}", to_json(&report)?);
    Ok(())
}

#[derive(Serialize)]
struct CpBody {
    distance_nm: f64,
    #[serde(rename = "shift_uK")]
    shift_uk: f64,
}

pub fn cp(config: &RunConfig, out: Option<&Path>) -> anyhow::Result<()> {
    let input = CasimirInput::effective(config.cp_distance_nm, config.fibre.n_core, config.cp_moment_au)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let body = CpBody { distance_nm: config.cp_distance_nm, shift_uk: cp_shift(&input) };
    let report = Report { meta: Meta::new(config, "distance in nm; shift in microkelvin"), body };
    let mut line = serde_json::to_string(&report).context("serialising report")?;
    line.push('\n');
    emit(&line, out, "cp.json")?;
    Ok(())
}
