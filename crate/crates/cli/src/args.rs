//! Command-line arguments.

use std::path::PathBuf;

use bosent::optics::{OverlapConvention, DEFAULT_RUNS, DEFAULT_SIGMA_UM};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bosent",
    version,
    about = "Entanglement of two identical bosons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the concurrence at one (theta, delay) point.
    Concurrence(PointArgs),
    /// Sweep a (theta, delay) grid and write one row per point.
    Sweep(SweepArgs),
    /// Simulate a HOM delay scan and fit the dip.
    Hom(HomArgs),
    /// Run the oracle-equivalence and invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ConventionArg {
    #[default]
    Paper,
    Quadrature,
}

impl From<ConventionArg> for OverlapConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => OverlapConvention::Paper,
            ConventionArg::Quadrature => OverlapConvention::Quadrature,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Wavepacket width, given either as `sigma` (um) or spectral `delta` (1/um).
#[derive(Debug, Clone, Args)]
pub struct WidthArgs {
    #[arg(long, default_value_t = DEFAULT_SIGMA_UM, conflicts_with = "delta", allow_negative_numbers = true)]
    pub sigma_um: f64,
    /// Spectral width; sets sigma = 1 / (2 delta).
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
}

impl WidthArgs {
    pub fn sigma(&self) -> f64 {
        self.delta.map_or(self.sigma_um, |d| 1.0 / (2.0 * d))
    }
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long, default_value_t = 22.5, allow_negative_numbers = true)]
    pub theta_deg: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delay_um: f64,
    #[command(flatten)]
    pub width: WidthArgs,
    #[arg(long, value_enum, default_value_t)]
    pub overlap_convention: ConventionArg,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma list or `start:stop:step`, in degrees. Defaults to `--theta-deg`.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_grid: Option<String>,
    /// Comma list or `start:stop:step`, in um. Defaults to `--delay-um`.
    #[arg(long, allow_hyphen_values = true)]
    pub delay_grid: Option<String>,
    #[command(flatten)]
    pub point: PointArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Add Monte Carlo concurrence estimates from simulated counts.
    #[arg(long)]
    pub noisy: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Counts per measurement setting.
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct HomArgs {
    #[arg(long, default_value_t = 22.5, allow_negative_numbers = true)]
    pub theta_deg: f64,
    #[arg(long, default_value_t = 0.99, allow_negative_numbers = true)]
    pub visibility: f64,
    #[arg(long, default_value_t = 132.0, allow_negative_numbers = true)]
    pub fwhm_um: f64,
    /// Mean counts per delay point away from the dip.
    #[arg(long, default_value_t = 1000)]
    pub baseline: u64,
    #[arg(long, default_value = "-300:300:10", allow_hyphen_values = true)]
    pub delay_grid: String,
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw Poisson counts instead of using the expected counts.
    #[arg(long)]
    pub noisy: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Flip every tolerance negative so each suite fails.
    #[arg(long, hide = true)]
    pub corrupt_tolerance: bool,
}
