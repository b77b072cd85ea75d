//! Run configuration: INI-style file plus command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::{Ini, Properties};
use nanotrap::polarisability::StateLabel;
use nanotrap::units::RubidiumIsotope;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: cannot read: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}:{line}:{col}: {msg}")]
    Syntax { path: String, line: usize, col: usize, msg: String },
    #[error("missing section [{0}]")]
    MissingSection(String),
    #[error("missing key `{key}` in [{section}]")]
    MissingKey { section: String, key: String },
    #[error("invalid value for `{key}` in [{section}]: {msg}")]
    InvalidValue { section: String, key: String, msg: String },
    #[error("unknown key `{key}` in [{section}]")]
    UnknownKey { section: String, key: String },
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("{0}")]
    Invalid(String),
}

/// How a laser's strength is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    AmplitudeAu(f64),
    PowerAu(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaserConfig {
    pub wavenumber_cm: f64,
    pub strength: Strength,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FibreConfig {
    pub radius_nm: f64,
    pub n_core: f64,
    pub n_clad: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarSource {
    Table,
    Computed,
}

/// Tabulated polarisability at one frequency, in atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableEntry {
    ParallelPerpendicular { parallel: f64, perpendicular: f64 },
    Cartesian([f64; 3]),
    Scalar(f64),
}

/// Entries for the travelling and standing frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TablePair {
    pub travelling: TableEntry,
    pub standing: TableEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapSettings {
    pub boundary_mk: f64,
    pub x_range_over_a: [f64; 2],
    pub y_half_over_a: f64,
    pub plane_points: usize,
    pub cut_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub fibre: FibreConfig,
    pub travelling: LaserConfig,
    pub standing: LaserConfig,
    pub isotope: u32,
    pub states: Vec<String>,
    pub polarisability: PolarSource,
    pub manifest: Option<PathBuf>,
    pub guard_cm: f64,
    /// Default entries, then per-state overrides keyed by label.
    pub table: Option<TablePair>,
    pub table_overrides: BTreeMap<String, TablePair>,
    pub trap: TrapSettings,
    pub cp_distance_nm: f64,
    pub cp_moment_au: f64,
    /// Where results go; not part of the configuration hash.
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
}

const KNOWN: &[(&str, &[&str])] = &[
    ("fibre", &["radius_nm", "n_core", "n_clad"]),
    ("travelling", &["wavenumber_cm", "amplitude_au", "power_au"]),
    ("standing", &["wavenumber_cm", "amplitude_au", "power_au"]),
    ("molecule", &["isotope", "states", "polarisability", "manifest", "guard_cm"]),
    ("trap", &["boundary_mk", "x_min_over_a", "x_max_over_a", "y_half_over_a", "plane_points", "cut_points"]),
    ("casimir", &["distance_nm", "moment_au"]),
    ("output", &["dir"]),
];

const TABLE_KEYS: &[&str] = &[
    "travelling.parallel",
    "travelling.perpendicular",
    "travelling.cartesian",
    "travelling.scalar",
    "standing.parallel",
    "standing.perpendicular",
    "standing.cartesian",
    "standing.scalar",
];

struct Section<'a> {
    name: String,
    props: Option<&'a Properties>,
}

impl<'a> Section<'a> {
    fn raw(&self, key: &str) -> Result<Option<&'a str>, ConfigError> {
        let Some(props) = self.props else { return Ok(None) };
        let mut values = props.get_all(key);
        let first = values.next();
        if values.next().is_some() {
            return Err(self.invalid(key, "given more than once".into()));
        }
        Ok(first.map(str::trim))
    }

    fn invalid(&self, key: &str, msg: String) -> ConfigError {
        ConfigError::InvalidValue { section: self.name.clone(), key: key.into(), msg }
    }

    fn parsed<V: FromStr>(&self, key: &str) -> Result<Option<V>, ConfigError>
    where
        V::Err: std::fmt::Display,
    {
        self.raw(key)?.map(|s| s.parse::<V>().map_err(|e| self.invalid(key, format!("`{s}`: {e}")))).transpose()
    }

    fn finite(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.parsed::<f64>(key)? {
            Some(x) if !x.is_finite() => Err(self.invalid(key, format!("{x} is not finite"))),
            other => Ok(other),
        }
    }

    fn required_finite(&self, key: &str) -> Result<f64, ConfigError> {
        self.finite(key)?.ok_or_else(|| ConfigError::MissingKey { section: self.name.clone(), key: key.into() })
    }

    fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let x = self.required_finite(key)?;
        if x <= 0.0 {
            return Err(self.invalid(key, format!("{x} must be positive")));
        }
        Ok(x)
    }

    fn positive_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.finite(key)? {
            None => Ok(default),
            Some(x) if x > 0.0 => Ok(x),
            Some(x) => Err(self.invalid(key, format!("{x} must be positive"))),
        }
    }
}

fn section<'a>(ini: &'a Ini, name: &str) -> Section<'a> {
    Section { name: name.into(), props: ini.section(Some(name)) }
}

fn required_section<'a>(ini: &'a Ini, name: &str) -> Result<Section<'a>, ConfigError> {
    let s = section(ini, name);
    if s.props.is_none() {
        return Err(ConfigError::MissingSection(name.into()));
    }
    Ok(s)
}

fn check_keys(name: &str, props: &Properties, allowed: &[&str]) -> Result<(), ConfigError> {
    for (key, _) in props.iter() {
        if !allowed.contains(&key) {
            return Err(ConfigError::UnknownKey { section: name.into(), key: key.into() });
        }
    }
    Ok(())
}

fn laser(ini: &Ini, name: &str) -> Result<LaserConfig, ConfigError> {
    let s = required_section(ini, name)?;
    let wavenumber_cm = s.positive("wavenumber_cm")?;
    let strength = match (s.finite("amplitude_au")?, s.finite("power_au")?) {
        (Some(a), None) if a > 0.0 => Strength::AmplitudeAu(a),
        (None, Some(p)) if p > 0.0 => Strength::PowerAu(p),
        (Some(_), Some(_)) => return Err(s.invalid("power_au", "give either amplitude_au or power_au, not both".into())),
        (None, None) => return Err(ConfigError::MissingKey { section: name.into(), key: "amplitude_au".into() }),
        (Some(_), None) => return Err(s.invalid("amplitude_au", "must be positive".into())),
        (None, Some(_)) => return Err(s.invalid("power_au", "must be positive".into())),
    };
    Ok(LaserConfig { wavenumber_cm, strength })
}

fn table_entry(s: &Section, prefix: &str) -> Result<Option<TableEntry>, ConfigError> {
    let key = |k: &str| format!("{prefix}.{k}");
    let par = s.finite(&key("parallel"))?;
    let perp = s.finite(&key("perpendicular"))?;
    let cart = s.raw(&key("cartesian"))?;
    let scalar = s.finite(&key("scalar"))?;
    let given = usize::from(par.is_some() || perp.is_some()) + usize::from(cart.is_some()) + usize::from(scalar.is_some());
    if given > 1 {
        return Err(s.invalid(prefix, "give one of parallel/perpendicular, cartesian or scalar".into()));
    }
    if let Some(text) = cart {
        let parts: Vec<f64> = text
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| s.invalid(&key("cartesian"), format!("`{p}`: {e}"))))
            .collect::<Result<_, _>>()?;
        let values: [f64; 3] = parts
            .try_into()
            .map_err(|_| s.invalid(&key("cartesian"), "expected three comma-separated values XX, YY, ZZ".into()))?;
        return Ok(Some(TableEntry::Cartesian(values)));
    }
    if let Some(x) = scalar {
        return Ok(Some(TableEntry::Scalar(x)));
    }
    match (par, perp) {
        (Some(parallel), Some(perpendicular)) => Ok(Some(TableEntry::ParallelPerpendicular { parallel, perpendicular })),
        (None, None) => Ok(None),
        (Some(_), None) => Err(ConfigError::MissingKey { section: s.name.clone(), key: key("perpendicular") }),
        (None, Some(_)) => Err(ConfigError::MissingKey { section: s.name.clone(), key: key("parallel") }),
    }
}

fn table_pair(s: &Section) -> Result<Option<TablePair>, ConfigError> {
    match (table_entry(s, "travelling")?, table_entry(s, "standing")?) {
        (Some(travelling), Some(standing)) => Ok(Some(TablePair { travelling, standing })),
        (None, None) => Ok(None),
        (None, Some(_)) => Err(ConfigError::MissingKey { section: s.name.clone(), key: "travelling.*".into() }),
        (Some(_), None) => Err(ConfigError::MissingKey { section: s.name.clone(), key: "standing.*".into() }),
    }
}

fn parse_state(text: &str) -> Result<String, ConfigError> {
    let label: StateLabel = text.parse().map_err(|e| ConfigError::Invalid(format!("state `{text}`: {e}")))?;
    Ok(label.to_string())
}

/// Rejects lines that are neither blank, comments, `[section]` headers nor `key = value`.
fn check_lines(text: &str, source: &str) -> Result<(), ConfigError> {
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let ok = line.is_empty()
            || line.starts_with(';')
            || line.starts_with('#')
            || (line.starts_with('[') && line.ends_with(']') && line.len() > 2)
            || (!line.starts_with('[') && line.contains('='));
        if !ok {
            let msg = if line.starts_with('[') { "malformed section header" } else { "expected `key = value`" };
            return Err(ConfigError::Syntax { path: source.into(), line: i + 1, col: 1, msg: msg.into() });
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        Self::parse(&text, &path.display().to_string(), path.parent().unwrap_or(Path::new(".")))
    }

    /// `base` resolves a relative manifest path.
    pub fn parse(text: &str, source: &str, base: &Path) -> Result<Self, ConfigError> {
        check_lines(text, source)?;
        let ini = Ini::load_from_str(text).map_err(|e| ConfigError::Syntax {
            path: source.into(),
            line: e.line,
            col: e.col,
            msg: e.msg.to_string(),
        })?;
        for (name, props) in ini.iter() {
            match name {
                None => {
                    if let Some((key, _)) = props.iter().next() {
                        return Err(ConfigError::UnknownKey { section: "<top level>".into(), key: key.into() });
                    }
                }
                Some(n) if n == "table" || n.starts_with("table ") => check_keys(n, props, TABLE_KEYS)?,
                Some(n) => match KNOWN.iter().find(|(s, _)| *s == n) {
                    Some((_, keys)) => check_keys(n, props, keys)?,
                    None => return Err(ConfigError::UnknownSection(n.into())),
                },
            }
        }

        let f = required_section(&ini, "fibre")?;
        let fibre = FibreConfig {
            radius_nm: f.positive("radius_nm")?,
            n_core: f.positive("n_core")?,
            n_clad: f.positive("n_clad")?,
        };
        let travelling = laser(&ini, "travelling")?;
        let standing = laser(&ini, "standing")?;

        let m = required_section(&ini, "molecule")?;
        let isotope: u32 = m.parsed("isotope")?.unwrap_or(87);
        if RubidiumIsotope::from_mass_number(isotope).is_none() {
            return Err(m.invalid("isotope", format!("{isotope} is not 85 or 87")));
        }
        let states = m
            .raw("states")?
            .ok_or_else(|| ConfigError::MissingKey { section: "molecule".into(), key: "states".into() })?
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_state)
            .collect::<Result<Vec<_>, _>>()?;
        let polarisability = match m.raw("polarisability")?.unwrap_or("table") {
            "table" => PolarSource::Table,
            "computed" => PolarSource::Computed,
            other => return Err(m.invalid("polarisability", format!("`{other}` is neither table nor computed"))),
        };
        let manifest = m.raw("manifest")?.map(|p| base.join(p));
        let guard_cm = m.positive_or("guard_cm", nanotrap::polarisability::DEFAULT_GUARD_CM)?;

        let table = table_pair(&section(&ini, "table"))?;
        let mut table_overrides = BTreeMap::new();
        for name in ini.sections().flatten().filter(|n| n.starts_with("table ")) {
            let label = parse_state(name["table ".len()..].trim())?;
            if let Some(pair) = table_pair(&section(&ini, name))? {
                table_overrides.insert(label, pair);
            }
        }

        let t = section(&ini, "trap");
        let x_max = t.positive_or("x_max_over_a", 3.0)?;
        let x_min = t.finite("x_min_over_a")?.unwrap_or(-x_max);
        let trap = TrapSettings {
            boundary_mk: t.finite("boundary_mk")?.unwrap_or(nanotrap::trap::DEFAULT_BOUNDARY_MK),
            x_range_over_a: [x_min, x_max],
            y_half_over_a: t.positive_or("y_half_over_a", 3.0)?,
            plane_points: t.parsed("plane_points")?.unwrap_or(121),
            cut_points: t.parsed("cut_points")?.unwrap_or(301),
        };

        let c = section(&ini, "casimir");
        let cp_distance_nm = c.positive_or("distance_nm", fibre.radius_nm)?;
        let cp_moment_au = c.finite("moment_au")?.unwrap_or(4.0);

        let output_dir = section(&ini, "output").raw("dir")?.map(PathBuf::from);

        let config = Self {
            fibre,
            travelling,
            standing,
            isotope,
            states,
            polarisability,
            manifest,
            guard_cm,
            table,
            table_overrides,
            trap,
            cp_distance_nm,
            cp_moment_au,
            output_dir,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.travelling.wavenumber_cm <= self.standing.wavenumber_cm {
            return Err(ConfigError::Invalid(format!(
                "travelling wavenumber {} cm^-1 must exceed standing wavenumber {} cm^-1",
                self.travelling.wavenumber_cm, self.standing.wavenumber_cm
            )));
        }
        if self.states.is_empty() {
            return Err(ConfigError::Invalid("no states to analyse".into()));
        }
        let [lo, hi] = self.trap.x_range_over_a;
        if !(lo < hi) {
            return Err(ConfigError::Invalid(format!("trap x range [{lo}, {hi}] is empty")));
        }
        if self.trap.plane_points < 2 || self.trap.cut_points < 2 {
            return Err(ConfigError::Invalid("trap grids need at least two points per axis".into()));
        }
        if !(self.cp_distance_nm > 0.0) {
            return Err(ConfigError::Invalid(format!("Casimir-Polder distance {} nm must be positive", self.cp_distance_nm)));
        }
        match self.polarisability {
            PolarSource::Computed if self.manifest.is_none() => {
                Err(ConfigError::MissingKey { section: "molecule".into(), key: "manifest".into() })
            }
            PolarSource::Table => {
                for state in &self.states {
                    self.table_for(state)?;
                }
                Ok(())
            }
            PolarSource::Computed => Ok(()),
        }
    }

    pub fn table_for(&self, state: &str) -> Result<TablePair, ConfigError> {
        self.table_overrides
            .get(state)
            .or(self.table.as_ref())
            .copied()
            .ok_or_else(|| ConfigError::Invalid(format!("no tabulated polarisability for state {state}; add [table] entries")))
    }

    pub fn isotope(&self) -> RubidiumIsotope {
        RubidiumIsotope::from_mass_number(self.isotope).unwrap_or(RubidiumIsotope::Rb87)
    }
}
