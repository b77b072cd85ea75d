use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use crate::special_math::HalfInteger;
use crate::units::{self, RubidiumIsotope};

use super::{
    solve_vibrational, transition_table, DipoleFunction, ElectronicCurve, ElectronicLabel, Parity, RovibState,
    SolverConfig, StructureError, TransitionEntry,
};

const DEFAULT_STEP: f64 = 0.02;
const DEFAULT_STATES: usize = 500;

/// Which second column a table carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Potential,
    Dipole,
}

fn parse_err(source: &str, line: usize, message: impl Into<String>) -> StructureError {
    StructureError::Parse { source_name: source.to_string(), line, message: message.into() }
}

/// Reads a two-column table, converting to bohr and hartree (or au of dipole).
///
/// A `# units: R=<bohr|angstrom> V=<hartree|cm-1>` line (or `d=au` for
/// dipoles) must precede the data.
pub fn parse_table(text: &str, source: &str, kind: TableKind) -> Result<(Vec<f64>, Vec<f64>), StructureError> {
    let mut scale_r: Option<f64> = None;
    let mut scale_v: Option<f64> = None;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(spec) = comment.trim().strip_prefix("units:") {
                let (r, v) = parse_units(spec, kind).map_err(|m| parse_err(source, line_no, m))?;
                scale_r = Some(r);
                scale_v = Some(v);
            }
            continue;
        }
        let (Some(sr), Some(sv)) = (scale_r, scale_v) else {
            return Err(parse_err(source, line_no, "data before the mandatory '# units:' header"));
        };
        let mut cols = line.split_whitespace();
        let mut next = |what: &str| -> Result<f64, StructureError> {
            let tok = cols.next().ok_or_else(|| parse_err(source, line_no, format!("missing {what} column")))?;
            tok.parse::<f64>().map_err(|_| parse_err(source, line_no, format!("cannot parse {tok:?} as a number")))
        };
        let r = next("distance")?;
        let v = next("value")?;
        xs.push(r * sr);
        ys.push(v * sv);
    }
    if scale_r.is_none() {
        return Err(parse_err(source, 0, "missing '# units:' header"));
    }
    Ok((xs, ys))
}

fn parse_units(spec: &str, kind: TableKind) -> Result<(f64, f64), String> {
    let mut r = None;
    let mut v = None;
    for item in spec.split_whitespace() {
        let (key, unit) = item.split_once('=').ok_or_else(|| format!("malformed unit item {item:?}"))?;
        match (key, kind) {
            ("R", _) => {
                r = Some(match unit {
                    "bohr" => 1.0,
                    "angstrom" => units::angstrom_to_bohr(1.0),
                    other => return Err(format!("unknown length unit {other:?}")),
                })
            }
            ("V", TableKind::Potential) => {
                v = Some(match unit {
                    "hartree" => 1.0,
                    "cm-1" => units::wavenumber_to_hartree(1.0),
                    other => return Err(format!("unknown energy unit {other:?}")),
                })
            }
            ("d", TableKind::Dipole) => {
                v = Some(match unit {
                    "au" => 1.0,
                    other => return Err(format!("unknown dipole unit {other:?}")),
                })
            }
            (other, _) => return Err(format!("unexpected unit key {other:?}")),
        }
    }
    match (r, v) {
        (Some(r), Some(v)) => Ok((r, v)),
        _ => Err("units header must declare R and the value column".into()),
    }
}

/// Curves, dipoles and solver settings declared by a manifest file.
#[derive(Debug, Clone)]
pub struct MolecularData {
    pub curves: Vec<ElectronicCurve<f64>>,
    pub dipoles: Vec<DipoleFunction<f64>>,
    /// Curve hosting the initial state.
    pub initial: String,
    pub solver: SolverConfig<f64>,
    pub states_per_curve: usize,
}

impl MolecularData {
    pub fn load(path: &Path) -> Result<Self, StructureError> {
        let text = read(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &path.display().to_string(), &base)
    }

    /// Parses manifest `text`; table paths are relative to `base`.
    pub fn parse(text: &str, source: &str, base: &Path) -> Result<Self, StructureError> {
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| parse_err(source, idx + 1, format!("expected key = value, got {line:?}")))?;
            entries.insert(key.trim().to_string(), (idx + 1, value.trim().to_string()));
        }
        let get = |key: &str| entries.get(key).map(|(l, v)| (*l, v.as_str()));
        let require = |key: &str| get(key).ok_or_else(|| parse_err(source, 0, format!("missing key {key:?}")));
        fn number<N: std::str::FromStr>(source: &str, (line, v): (usize, &str), key: &str) -> Result<N, StructureError> {
            v.parse().map_err(|_| parse_err(source, line, format!("{key}: cannot parse {v:?}")))
        }

        let mut labels = BTreeMap::new();
        let mut curves = Vec::new();
        for name in names_with_prefix(&entries, "curve.") {
            let key = |field: &str| format!("curve.{name}.{field}");
            let lambda: i32 = number(source, require(&key("lambda"))?, &key("lambda"))?;
            let spin_entry = require(&key("spin"))?;
            let spin: HalfInteger =
                spin_entry.1.parse().map_err(|e| parse_err(source, spin_entry.0, format!("{}: {e}", key("spin"))))?;
            let parity = match get(&key("parity")) {
                None => None,
                Some((_, "g")) => Some(Parity::Gerade),
                Some((_, "u")) => Some(Parity::Ungerade),
                Some((line, other)) => return Err(parse_err(source, line, format!("parity must be g or u, got {other:?}"))),
            };
            let index = match get(&key("index")) {
                Some(e) => number(source, e, &key("index"))?,
                None => 1,
            };
            let label = ElectronicLabel { name: name.clone(), lambda, spin, parity, index };
            let file = base.join(require(&key("file"))?.1);
            let (grid, energies) = parse_table(&read(&file)?, &file.display().to_string(), TableKind::Potential)?;
            curves.push(ElectronicCurve::new(label.clone(), grid, energies)?);
            labels.insert(name, label);
        }

        let mut dipoles = Vec::new();
        for name in names_with_prefix(&entries, "dipole.") {
            let key = |field: &str| format!("dipole.{name}.{field}");
            let lookup = |field: &str| -> Result<&ElectronicLabel, StructureError> {
                let (line, curve) = require(&key(field))?;
                labels.get(curve).ok_or_else(|| parse_err(source, line, format!("unknown curve {curve:?}")))
            };
            let (from, to) = (lookup("from")?, lookup("to")?);
            let file = base.join(require(&key("file"))?.1);
            let (grid, values) = parse_table(&read(&file)?, &file.display().to_string(), TableKind::Dipole)?;
            dipoles.push(DipoleFunction::new(from, to, grid, values)?);
        }

        let (line, initial) = require("initial")?;
        if !labels.contains_key(initial) {
            return Err(parse_err(source, line, format!("initial curve {initial:?} is not declared")));
        }
        let isotope = match get("isotope") {
            Some(e) => {
                let a: u32 = number(source, e, "isotope")?;
                RubidiumIsotope::from_mass_number(a)
                    .ok_or_else(|| parse_err(source, e.0, format!("unsupported isotope {a}")))?
            }
            None => RubidiumIsotope::Rb87,
        };
        let r_min = number(source, require("grid.r_min")?, "grid.r_min")?;
        let r_max = number(source, require("grid.r_max")?, "grid.r_max")?;
        let step = match get("grid.step") {
            Some(e) => number(source, e, "grid.step")?,
            None => DEFAULT_STEP,
        };
        let mut solver = SolverConfig::new(r_min, r_max, step, isotope);
        if let Some(e) = get("centrifugal") {
            solver.centrifugal = number(source, e, "centrifugal")?;
        }
        let states_per_curve = match get("states_per_curve") {
            Some(e) => number(source, e, "states_per_curve")?,
            None => DEFAULT_STATES,
        };
        Ok(Self { curves, dipoles, initial: initial.to_string(), solver, states_per_curve })
    }

    pub fn curve(&self, name: &str) -> Result<&ElectronicCurve<f64>, StructureError> {
        self.curves.iter().find(|c| c.label.name == name).ok_or_else(|| StructureError::UnknownCurve(name.into()))
    }

    /// Solves the initial level `v` with angular momentum `j`, the excited
    /// manifolds, and tabulates the transitions between them.
    pub fn transitions(
        &self,
        v: usize,
        j: HalfInteger,
    ) -> Result<(RovibState<f64>, Vec<TransitionEntry<f64>>), StructureError> {
        let initial_curve = self.curve(&self.initial)?;
        let mut ground = solve_vibrational(initial_curve, j, v + 1, &self.solver)?;
        let initial = ground.swap_remove(v);
        let manifolds: Vec<Vec<RovibState<f64>>> = self
            .curves
            .par_iter()
            .filter(|c| c.label.name != self.initial)
            .filter(|c| self.dipoles.iter().any(|d| d.connects(&self.initial, &c.label.name)))
            .map(|c| solve_vibrational(c, j, self.states_per_curve, &self.solver))
            .collect::<Result<_, _>>()?;
        let finals: Vec<RovibState<f64>> = manifolds.into_iter().flatten().collect();
        let table = transition_table(&initial, &finals, &self.dipoles)?;
        Ok((initial, table))
    }
}

fn names_with_prefix(entries: &BTreeMap<String, (usize, String)>, prefix: &str) -> Vec<String> {
    let mut names: Vec<String> = entries
        .keys()
        .filter_map(|k| k.strip_prefix(prefix))
        .filter_map(|rest| rest.rsplit_once('.').map(|(name, _)| name.to_string()))
        .collect();
    names.dedup();
    names
}

fn read(path: &Path) -> Result<String, StructureError> {
    std::fs::read_to_string(path).map_err(|e| StructureError::Io { path: path.display().to_string(), message: e.to_string() })
}
