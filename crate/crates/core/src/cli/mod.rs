//! The `concircle` command line: one subcommand per kind of run, all driven
//! by a TOML scenario file.
//!
//! Every run writes its outputs and an `effective_config.toml` into the
//! output directory. Running again from that file reproduces the CSVs byte
//! for byte. Exit codes are 0 when every check passes, 1 when a check fails,
//! 2 for configuration errors and 3 for runtime errors.

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::{check_metric, convergence, integrate, verify_operators, verify_variational};
pub use config::{
    ConvergenceConfig, InitialConfig, IntegrationConfig, LagrangianConfig, MetricConfig, OutputConfig, ScenarioConfig,
    VerificationConfig,
};
pub use report::{fmt_f64, Location, Report, ReportRow, Verdict};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Name of the resolved configuration written next to the outputs.
pub const EFFECTIVE_CONFIG: &str = "effective_config.toml";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) | CliError::Io(_) => EXIT_RUNTIME,
        }
    }
}

macro_rules! runtime_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Runtime(e.to_string())
            }
        }
    )*};
}

runtime_from!(
    crate::geometry::GeometryError,
    crate::jet::JetError,
    crate::mechanics::MechanicsError,
    crate::expr::EvalError
);

impl From<crate::integrate::IntegrateError> for CliError {
    fn from(e: crate::integrate::IntegrateError) -> Self {
        match e {
            crate::integrate::IntegrateError::InvalidConfig(msg) => CliError::Config(msg),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Christoffel and curvature identities of the metric, and a table of K.
    CheckMetric,
    /// Identities of the jet and covariant calculus on random jets.
    VerifyOperators,
    /// Variationality tests: δ² = 0 and the planar third-order source form.
    VerifyVariational,
    /// Integrate a geodesic circle and write the trajectory.
    Integrate,
    /// Estimate the observed order of the fixed-step integrator.
    Convergence,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckMetric => "check_metric",
            Command::VerifyOperators => "verify_operators",
            Command::VerifyVariational => "verify_variational",
            Command::Integrate => "integrate",
            Command::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "concircle", version, about = "Geodesic circles on surfaces: checks, integration, convergence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario file; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for random jet samples [default: config value, else 42].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory, overriding `output.dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Logging is controlled by `CONCIRCLE_LOG` (`error`, `warn`, `info`, …).
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("CONCIRCLE_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Config file plus command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.verification.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output.dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one command; returns the report and, for trajectories that stopped
/// early, the error to exit with once the report is written.
pub fn execute(command: Command, cfg: &ScenarioConfig) -> Result<(Report, Option<CliError>), CliError> {
    let out = &cfg.output.dir;
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    std::fs::write(out.join(EFFECTIVE_CONFIG), cfg.to_toml())?;
    let report = match command {
        Command::CheckMetric => check_metric(cfg, out)?,
        Command::VerifyOperators => verify_operators(cfg, out)?,
        Command::VerifyVariational => verify_variational(cfg, out)?,
        Command::Integrate => return integrate(cfg, out).and_then(|(r, e)| write_report(command, cfg, r, e)),
        Command::Convergence => convergence(cfg, out)?,
    };
    write_report(command, cfg, report, None)
}

fn write_report(
    command: Command,
    cfg: &ScenarioConfig,
    report: Report,
    pending: Option<CliError>,
) -> Result<(Report, Option<CliError>), CliError> {
    let path = cfg.output.dir.join(format!("{}_report.csv", command.name()));
    let file = std::fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    report.write_csv(std::io::BufWriter::new(file))?;
    Ok((report, pending))
}

/// Parses arguments, runs, prints the report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    let result = resolve_config(&cli).and_then(|cfg| execute(cli.command, &cfg));
    match result {
        Ok((report, pending)) => {
            print!("{report}");
            if let Some(e) = pending {
                eprintln!("{e}");
                return e.exit_code();
            }
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
