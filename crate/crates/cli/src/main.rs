#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Numerical, Scan};
use config::{ConfigError, RunConfig, Strength};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Two-colour evanescent-field trap for diatomic molecules around an optical nanofibre.
#[derive(Debug, Parser)]
#[command(name = "nanotrap", version)]
struct Cli {
    /// INI-style run configuration.
    #[arg(long, global = true, default_value = "paper.cfg")]
    config: PathBuf,
    /// State label replacing the configured list; repeatable.
    #[arg(long = "state", global = true, value_name = "SPEC")]
    states: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Field amplitudes (au) of the travelling and standing beams.
    #[arg(long, global = true, num_args = 2, value_names = ["TRAVELLING", "STANDING"], conflicts_with = "power")]
    amplitude: Option<Vec<f64>>,
    /// Guided powers (au) of the travelling and standing beams.
    #[arg(long, global = true, num_args = 2, value_names = ["TRAVELLING", "STANDING"])]
    power: Option<Vec<f64>>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Guided-mode parameters of both lasers.
    Mode,
    /// Polarisability tensors of the configured states.
    Polar {
        /// Scalar polarisability scan over [LO, HI] cm^-1 in steps of STEP.
        #[arg(long, num_args = 3, value_names = ["LO", "HI", "STEP"], allow_negative_numbers = true)]
        scan: Option<Vec<f64>>,
        /// Single wavenumber (cm^-1) instead of the two laser lines.
        #[arg(long, conflicts_with = "scan")]
        wavenumber: Option<f64>,
    },
    /// Trapping potential maps or trap analysis.
    Trap {
        #[command(subcommand)]
        action: TrapAction,
    },
    /// Nonretarded Casimir-Polder shift at the surface distance.
    Cp {
        /// Surface distance in nm (default from the configuration).
        #[arg(long, allow_negative_numbers = true)]
        distance: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum TrapAction {
    /// Potential planes and cuts as CSV.
    Grid,
    /// Minimum, spring constants, bound-state count, extents and tunnelling as JSON.
    Analyze,
}

fn resolve(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::load(&cli.config)?;
    if !cli.states.is_empty() {
        config.states = cli.states.clone();
    }
    let pair = |v: &Vec<f64>, make: fn(f64) -> Strength| {
        config_pair(v).map(|[t, s]| (make(t), make(s)))
    };
    if let Some(v) = &cli.amplitude {
        let (t, s) = pair(v, Strength::AmplitudeAu)?;
        config.travelling.strength = t;
        config.standing.strength = s;
    }
    if let Some(v) = &cli.power {
        let (t, s) = pair(v, Strength::PowerAu)?;
        config.travelling.strength = t;
        config.standing.strength = s;
    }
    if let Command::Cp { distance: Some(d) } = cli.command {
        config.cp_distance_nm = d;
    }
    if let Some(dir) = &cli.out {
        config.output_dir = Some(dir.clone());
    }
    config.states = config
        .states
        .iter()
        .map(|s| s.parse::<nanotrap::polarisability::StateLabel>().map(|l| l.to_string()))
        .collect::<Result<_, _>>()
        .map_err(|e| ConfigError::Invalid(format!("--state: {e}")))?;
    config.validate()?;
    Ok(config)
}

fn config_pair(v: &[f64]) -> Result<[f64; 2], ConfigError> {
    match v {
        [t, s] if *t > 0.0 && *s > 0.0 && t.is_finite() && s.is_finite() => Ok([*t, *s]),
        _ => Err(ConfigError::Invalid(format!("beam strengths must be two positive numbers, got {v:?}"))),
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let config = resolve(cli)?;
    let out = config.output_dir.clone();
    let out = out.as_deref();
    match &cli.command {
        Command::Mode => commands::mode(&config, out),
        Command::Polar { scan, wavenumber } => {
            let scan = scan.as_ref().map(|v| Scan { lo: v[0], hi: v[1], step: v[2] });
            commands::polar(&config, scan, *wavenumber, out)
        }
        Command::Trap { action: TrapAction::Analyze } => commands::trap_analyze(&config, out),
        Command::Trap { action: TrapAction::Grid } => {
            commands::trap_grid(&config, out.unwrap_or(std::path::Path::new("out")))
        }
        Command::Cp { .. } => commands::cp(&config, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(EXIT_CONFIG)
            } else if e.downcast_ref::<Numerical>().is_some() {
                ExitCode::from(EXIT_NUMERICAL)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
