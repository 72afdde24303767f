//! `noat`: command-line front end for the spectral laboratory.
//!
//! Payloads (JSON, JSON Lines, CSV) go to `--out` and/or stdout; human
//! diagnostics go to stderr. Exit codes: 0 success, 1 I/O or numerical failure,
//! 2 invalid input, 3/4 for `certify` verdicts other than SBH.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use noat_core::LabError;

#[derive(Parser, Debug)]
#[command(
    name = "noat",
    version,
    about = "Spectral laboratory for non-approximate-transitivity probes"
)]
#[command(propagate_version = true, allow_negative_numbers = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random stream of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = one per core). Does not affect results.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Payload file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the payload to stdout (the default when `--out` is absent).
    #[arg(long, global = true)]
    pub stdout: bool,
    /// `key = value` file supplying defaults for flags not given.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Build or transform a measure table.
    #[command(allow_negative_numbers = true)]
    Measure(MeasureArgs),
    /// Certify (or refute) the SBH property of a measure file.
    #[command(allow_negative_numbers = true)]
    Certify(CertifyArgs),
    /// Correlation tables and name batches of the symbolic systems.
    #[command(allow_negative_numbers = true)]
    System(SystemArgs),
    /// Gaussian process experiments.
    #[command(subcommand)]
    Gaussian(GaussianCmd),
    /// Search for funny words that beat the non-AT bound.
    #[command(allow_negative_numbers = true)]
    Funny(FunnyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    Lebesgue,
    Dirac,
    Geometric,
    Riesz,
    Sqrt,
    Arcsine,
    Arcsine4,
    Subsample,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    pub kind: MeasureKind,
    /// Half width of the table.
    #[arg(long = "N", default_value_t = 64)]
    pub n: usize,
    /// Riesz amplitudes.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Vec<f64>,
    /// Riesz frequencies.
    #[arg(long, value_delimiter = ',')]
    pub freq: Vec<u64>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Template constant (defaults to the Gaussian-cocycle constant).
    #[arg(long)]
    pub c: Option<f64>,
    /// Subsampling power.
    #[arg(long)]
    pub m: Option<usize>,
    /// Input measure for transforms.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Load the input without the PSD check.
    #[arg(long)]
    pub skip_psd: bool,
    /// Write `theta,density` samples of the truncated density here.
    #[arg(long)]
    pub density_csv: Option<PathBuf>,
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub skip_psd: bool,
    /// Exhaustive search size.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 12)]
    pub window: usize,
    #[arg(long)]
    pub no_exhaustive: bool,
    #[arg(long, default_value_t = 16)]
    pub heur_k: usize,
    #[arg(long, default_value_t = 64)]
    pub heur_window: usize,
    #[arg(long, default_value_t = 2000)]
    pub budget: usize,
    #[arg(long)]
    pub no_heuristic: bool,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Certify every power subsample `m` in `A..B` (inclusive).
    #[arg(long)]
    pub subsample_scan: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    #[value(alias = "rs")]
    RudinShapiro,
    Nil,
    Distal,
    Rotation,
    Odometer,
    Coin,
    Constant,
    Biased,
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Rotation number: a decimal, `sqrt2-1` or `golden`.
    #[arg(long, default_value = "sqrt2-1", value_parser = parse_irrational)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.8)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Width of the cocycle bump (0 gives the Lebesgue case).
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 1)]
    pub m_scale: i64,
    /// Odometer cocycle table as a bit string of length 2^d (default: first digit).
    #[arg(long)]
    pub table: Option<String>,
    /// `P(bit = 0)` for the biased fixture.
    #[arg(long, default_value_t = 0.5)]
    pub p0: f64,
}

#[derive(Args, Debug)]
pub struct SystemArgs {
    pub kind: SourceKind,
    #[command(flatten)]
    pub src: SourceArgs,
    #[arg(long, default_value_t = 16)]
    pub nmax: usize,
    /// Report a single lag instead of `0..=nmax`.
    #[arg(long = "n")]
    pub lag: Option<i64>,
    /// Rudin-Shapiro sequence length.
    #[arg(long = "L", default_value_t = 1 << 20)]
    pub l: usize,
    /// Square-wave truncation.
    #[arg(long = "M", default_value_t = noat_core::systems::DEFAULT_M)]
    pub m: usize,
    #[arg(long, default_value_t = 0.5)]
    pub delta0: f64,
    /// Initial quadrature grid for the rotation cocycle (0 = automatic).
    #[arg(long, default_value_t = 0)]
    pub quad_points: usize,
    /// Estimate correlations from this many sampled names instead.
    #[arg(long)]
    pub empirical: Option<usize>,
    /// Write a binary name batch here.
    #[arg(long)]
    pub names_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long)]
    pub length: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum GaussianCmd {
    /// Monte Carlo orthant probability against its arcsine law.
    #[command(allow_negative_numbers = true)]
    Orthant(OrthantArgs),
    /// Check of the Gaussian-cocycle constant chain.
    #[command(allow_negative_numbers = true)]
    Constants(ConstantsArgs),
    /// Correlation table of the sign cocycle over a Gaussian spec.
    #[command(allow_negative_numbers = true)]
    Cocycle(CocycleArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadrantArg {
    PosPos,
    NegNeg,
}

#[derive(Args, Debug)]
pub struct OrthantArgs {
    /// Lag-one correlation; alternative to `--spec`.
    #[arg(long, conflicts_with = "spec")]
    pub r: Option<f64>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub lag: i64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Number of multiplied copies: 1, 2 or 4.
    #[arg(long, default_value_t = 1, value_parser = parse_fold)]
    pub fold: usize,
    #[arg(long, value_enum, default_value_t = QuadrantArg::PosPos)]
    pub quadrant: QuadrantArg,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    /// Evaluate the chain at this constant instead.
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CocycleArgs {
    /// Autocovariance as a measure file.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub nmax: usize,
    /// Fourier truncation of the sign function.
    #[arg(long = "M", default_value_t = 10_000)]
    pub m: usize,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FunnyArgs {
    #[arg(long)]
    pub system: SourceKind,
    #[command(flatten)]
    pub src: SourceArgs,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 32)]
    pub k: usize,
    /// Largest index plus one (default 4k).
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub offsets: usize,
    #[arg(long, default_value_t = 16)]
    pub random_subsets: usize,
    /// Training names and, separately, held-out names.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Append a sign-symmetry check of the best word.
    #[arg(long)]
    pub symmetry: bool,
}

fn parse_fold(s: &str) -> Result<usize, String> {
    match s {
        "1" | "2" | "4" => Ok(s.parse().expect("digit")),
        _ => Err(format!("fold must be 1, 2 or 4, got `{s}`")),
    }
}

fn parse_irrational(s: &str) -> Result<f64, String> {
    match s {
        "sqrt2-1" => Ok(noat_core::systems::SQRT2_MINUS_1),
        "golden" => Ok(noat_core::systems::GOLDEN),
        _ => s
            .parse::<f64>()
            .map_err(|e| format!("expected a number, `sqrt2-1` or `golden`: {e}")),
    }
}

/// Where payloads go.
pub struct Sink {
    out: Option<PathBuf>,
    stdout: bool,
}

impl Sink {
    pub fn emit(&self, payload: &[u8]) -> noat_core::Result<()> {
        if let Some(p) = &self.out {
            std::fs::write(p, payload)?;
        }
        if self.stdout || self.out.is_none() {
            let mut so = std::io::stdout().lock();
            so.write_all(payload)?;
            so.flush()?;
        }
        Ok(())
    }
}

fn exit_code(e: &LabError) -> u8 {
    match e {
        LabError::Io(_) | LabError::Quadrature(_) | LabError::Factorization(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match config::inject(&Cli::command(), argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(argv);
    let sink = Sink {
        out: cli.global.out.clone(),
        stdout: cli.global.stdout,
    };
    let run = noat_core::parallel::with_workers(cli.global.workers, || {
        commands::run(&cli.command, &cli.global, &sink)
    });
    match run.and_then(|r| r) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
