use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stepprony_core::prony::SolveMode;

#[derive(Debug, Parser)]
#[command(
    name = "stepprony",
    version,
    about = "Step-function and spike-train inversion from Fourier data, plus approximation sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded random step function (or spike train) as JSON.
    Gen(GenArgs),
    /// Compute Fourier coefficients (or moments) of a signal file as CSV.
    Measure(MeasureArgs),
    /// Recover a signal from a measurement CSV; writes a JSON report.
    Reconstruct(ReconstructArgs),
    /// Run a width, entropy, approximation or bit-budget sweep as CSV.
    Sweep(SweepArgs),
    /// Generate, measure and reconstruct many seeded signals; writes a JSON summary.
    Roundtrip(RoundtripArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    #[value(name = "least_squares", alias = "least-squares")]
    LeastSquares,
}

impl From<Mode> for SolveMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => SolveMode::Exact,
            Mode::LeastSquares => SolveMode::LeastSquares,
        }
    }
}

/// `--order`: a jump/spike count, or `auto` for numerical-rank estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Order {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Order::Auto);
        }
        s.parse()
            .map(Order::Fixed)
            .map_err(|_| format!("expected a non-negative integer or \"auto\", got {s:?}"))
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Auto => f.write_str("auto"),
            Order::Fixed(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// Number of jumps (or spikes).
    #[arg(long, short = 'n')]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub min_separation: f64,
    /// Smallest jump size (or spike amplitude magnitude).
    #[arg(long, default_value_t = 0.2)]
    pub min_jump: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Generate a spike train instead of a step function.
    #[arg(long)]
    pub spikes: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    /// Signal JSON file.
    pub input: PathBuf,
    /// Highest coefficient index (or moment order).
    #[arg(long, short = 'k')]
    pub k_max: u32,
    /// Standard deviation of additive Gaussian noise.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    /// Measurement CSV file.
    pub input: PathBuf,
    #[arg(long, default_value = "auto")]
    pub order: Order,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Largest acceptable RMS misfit against every row of the input.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// Relative singular-value cutoff for `--order auto`.
    #[arg(long, default_value_t = 1e-8)]
    pub rank_tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Widths,
    Entropy,
    Nm,
    Approx,
    Budget,
}

impl SweepKind {
    pub fn label(self) -> &'static str {
        match self {
            SweepKind::Widths => "widths",
            SweepKind::Entropy => "entropy",
            SweepKind::Nm => "nm",
            SweepKind::Approx => "approx",
            SweepKind::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub kind: SweepKind,
    /// Number of steps in the parameter grid on [0, 1].
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    /// Subspace dimensions (widths) or term counts (approx).
    #[arg(long, short = 'n', value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Accuracies (entropy, budget).
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Vec<f64>,
    /// `NxM` pairs (nm), e.g. `4x4,8x2`.
    #[arg(long, value_delimiter = ',')]
    pub pairs: Vec<String>,
    /// Jump positions of `H_t` (approx).
    #[arg(long, short = 't', value_delimiter = ',')]
    pub t: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RoundtripArgs {
    /// Number of jumps per signal.
    #[arg(long, short = 'n')]
    pub n: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of normalized coefficients used; defaults to `2n+1`.
    #[arg(long, short = 'k')]
    pub k_max: Option<u32>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0.05)]
    pub min_separation: f64,
    #[arg(long, default_value_t = 0.2)]
    pub min_jump: f64,
    /// Per-trial error threshold; defaults to `max(1e-8, 1e3·sigma)`.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
