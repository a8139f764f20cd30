use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rotring::sweep::{emit_csv, run_sweep, ConfigError, RawConfig, SweepError};

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

/// Rotating quantum ring: spectra, persistent currents and magnetization as CSV.
#[derive(Parser, Debug)]
#[command(name = "rotring", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenenergies of the levels in `m_list` (μeV).
    Spectrum(RunArgs),
    /// Total persistent current (A).
    Current(RunArgs),
    /// Total magnetization (J/T).
    Magnetization(RunArgs),
    /// Every output listed under `outputs`.
    Sweep(RunArgs),
}

/// Each flag overrides the config key of the same name.
#[derive(Args, Debug)]
struct RunArgs {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, allow_hyphen_values = true)]
    radius_nm: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mass_ratio: Option<String>,
    #[arg(long = "field-T", alias = "field-t", allow_hyphen_values = true)]
    field_t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    flux_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega_rad_s: Option<String>,
    #[arg(long = "omega-GHz", alias = "omega-ghz", allow_hyphen_values = true)]
    omega_ghz: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega_grid: Option<String>,
    #[arg(
        long = "temperature-mK",
        alias = "temperature-mk",
        allow_hyphen_values = true
    )]
    temperature_mk: Option<String>,
    #[arg(long)]
    electrons: Option<String>,
    #[arg(long)]
    outputs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m_list: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        [
            ("radius_nm", &self.radius_nm),
            ("mass_ratio", &self.mass_ratio),
            ("field_T", &self.field_t),
            ("flux_grid", &self.flux_grid),
            ("omega_rad_s", &self.omega_rad_s),
            ("omega_GHz", &self.omega_ghz),
            ("omega_grid", &self.omega_grid),
            ("temperature_mK", &self.temperature_mk),
            ("electrons", &self.electrons),
            ("outputs", &self.outputs),
            ("m_list", &self.m_list),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }
}

enum Failure {
    Io(String),
    Config(ConfigError),
    Sweep(SweepError),
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (args, forced_output) = match &cli.command {
        Command::Spectrum(a) => (a, Some("energy")),
        Command::Current(a) => (a, Some("current")),
        Command::Magnetization(a) => (a, Some("magnetization")),
        Command::Sweep(a) => (a, None),
    };

    let mut raw = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
            RawConfig::parse(&text).map_err(Failure::Config)?
        }
        None => RawConfig::default(),
    };
    if let Some(output) = forced_output {
        raw.set_flag("outputs", output).map_err(Failure::Config)?;
    }
    for (key, value) in args.overrides() {
        raw.set_flag(key, value).map_err(Failure::Config)?;
    }
    let spec = raw.into_spec().map_err(Failure::Config)?;
    let table = run_sweep(&spec).map_err(Failure::Sweep)?;

    let io_err = |e: io::Error| Failure::Io(e.to_string());
    match &args.out {
        Some(path) => {
            let mut file = fs::File::create(path)
                .map_err(|e| Failure::Io(format!("cannot create {}: {e}", path.display())))?;
            emit_csv(&table, &mut file).map_err(io_err)?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit_csv(&table, &mut lock).map_err(io_err)?;
            lock.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Sweep(e @ SweepError::Params(_))) => {
            eprintln!("config error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Sweep(e)) => {
            eprintln!("numerical error: {e}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}
