//! `opfact` command line: verify, solve, evolve, paradox, densitymap.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Scalar;
use crate::grid::SpatialGrid;

pub use commands::{density_map, DensityMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Check(_) | CliError::Io(_) => EXIT_CHECK_FAILED,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "opfact",
    version,
    about = "Factorized time-evolution operators: exact identities, coefficient ODEs, Gaussian and grid propagation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Check a factorization identity as an exact truncated series.
    Verify(VerifyArgs),
    /// Integrate a coefficient ODE system and compare with its closed form.
    Solve(SolveArgs),
    /// Evolve a Gaussian packet with one of several methods.
    Evolve(EvolveArgs),
    /// Truncated Taylor series vs split-step evolution of a compact bump.
    Paradox(ParadoxArgs),
    /// |ψ(x,t)|² over a time range.
    Densitymap(DensityMapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Csv,
    Json,
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

/// Parses `p/q` fractions as well as plain decimals.
fn parse_real(s: &str) -> Result<f64, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
        let q: f64 = q.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
        if q == 0.0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(p / q);
    }
    s.trim().parse().map_err(|_| format!("bad number {s:?}"))
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// bch, case1, case2-bab, case2-aba, case2-cab, case2-cab-hyperbolic,
    /// ho-bab, ho-aba, ho-cab, force, force-xpp
    #[arg(long)]
    pub case: String,
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    pub delta: Scalar,
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    pub k: Scalar,
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    pub gamma: Scalar,
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    pub kappa: Scalar,
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    pub m: Scalar,
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    pub omega: Scalar,
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    pub hbar: Scalar,
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    #[serde(serialize_with = "as_string")]
    pub force: Scalar,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

fn as_string<S: serde::Serializer>(v: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    /// bch, case1, case2-bab, case2-aba, appendix-cab
    #[arg(long)]
    pub case: String,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub delta: f64,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub k: f64,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub gamma: f64,
    #[arg(long, value_parser = parse_real, default_value = "1", allow_hyphen_values = true)]
    pub xi_end: f64,
    #[arg(long, value_parser = parse_real, default_value = "1e-3")]
    pub step: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    Free,
    Force,
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Factorized,
    ClosedForm,
    SplitStep,
    Eigenstates,
    Taylor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    Bab,
    Aba,
    Cab,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PhysicsArgs {
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub m: f64,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub omega: f64,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub hbar: f64,
    #[arg(long, value_parser = parse_real, default_value = "1", allow_hyphen_values = true)]
    pub force: f64,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub sigma: f64,
    /// Initial packet centre.
    #[arg(long, value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
    pub x0: f64,
    /// Initial mean wavenumber.
    #[arg(long, value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
    pub k0: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, value_parser = parse_real, default_value = "-20", allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, value_parser = parse_real, default_value = "20", allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    #[arg(long, value_parser = parse_real, default_value = "1e-3")]
    pub dt: f64,
}

impl GridArgs {
    pub fn grid(&self) -> Result<SpatialGrid, CliError> {
        SpatialGrid::new(self.x_min, self.x_max, self.n).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Args, Default)]
pub struct OutputArgs {
    /// Directory for data files and the run manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Option<Format>,
}

#[derive(Debug, Args, Serialize)]
pub struct EvolveArgs {
    #[arg(long, value_enum)]
    pub system: System,
    #[arg(long, value_enum, default_value = "factorized")]
    pub method: Method,
    /// Factor ordering for the harmonic factorized method.
    #[arg(long, value_enum, default_value = "bab")]
    pub ordering: Ordering,
    /// Comma-separated output times.
    #[arg(long, alias = "t", value_delimiter = ',', value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
    pub times: Vec<f64>,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Truncation order of the Taylor method.
    #[arg(long, default_value_t = 20)]
    pub order: usize,
    /// Highest Hermite index for the eigenstates method.
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
    /// Also run every other applicable method and report pairwise L2 distances.
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ParadoxArgs {
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub a: f64,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub t: f64,
    #[arg(long, default_value_t = 20)]
    pub order: usize,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub m: f64,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub hbar: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct DensityMapArgs {
    #[arg(long, value_enum, default_value = "harmonic")]
    pub system: System,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
    pub t_start: f64,
    /// Defaults to 4π/ω for the harmonic system and 2 otherwise.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    /// Number of time intervals; the map has `steps + 1` rows.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, value_parser = parse_real, default_value = "-10", allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, value_parser = parse_real, default_value = "10", allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 401)]
    pub nx: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

/// Written next to the data of every run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub tool_version: String,
    pub timestamp_unix_s: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix_s: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// reports to `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match commands::dispatch(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
