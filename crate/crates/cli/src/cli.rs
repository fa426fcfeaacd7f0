use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "covcorr",
    version,
    about = "Simulation-based correction of interval endpoints, with coverage experiments",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Empirical coverage of one interval method over R replicate analyses.
    Coverage(CoverageArgs),
    /// Quartiles of corrected endpoints along one configuration axis.
    Sweep(SweepArgs),
    /// Variance of the scaled shift-quantile error against its limit.
    Clt(CltArgs),
    /// ABC on a g-and-k MA(1) series: raw and corrected credible intervals.
    AbcDemo(AbcDemoArgs),
    /// Correct the interval for a dataset read from a file.
    Correct(CorrectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    NormalLocation,
    NormalScale,
    GkMa1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodName {
    Pivot,
    CorrectedPivot,
    Bootstrap,
    CorrectedBootstrap,
    DoubleBootstrap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Epsilon,
    ThetaTilde,
    M,
}

#[derive(Debug, Args)]
pub struct Common {
    /// key=value file with the same names as the flags; flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub out: Format,
    /// Write `<subcommand>.<csv|json>` here instead of stdout
    /// (default from COVCORR_OUT_DIR).
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

/// g-and-k ABC settings.
#[derive(Debug, Args)]
pub struct AbcArgs {
    #[arg(long, default_value_t = 2000)]
    pub n_sims: usize,
    #[arg(long, default_value_t = 0.02)]
    pub accept_frac: f64,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[arg(long, value_enum)]
    pub model: ModelName,
    #[arg(long, value_enum, default_value_t = MethodName::Pivot)]
    pub method: MethodName,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    /// Data size; series length for gk-ma1 [default: 20, or 50 for gk-ma1].
    #[arg(long)]
    pub m: Option<usize>,
    /// Simulated datasets per correction.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    /// Replicate analyses.
    #[arg(long = "R", default_value_t = 1000)]
    pub reps: usize,
    /// True parameter, comma separated [default depends on the model].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    /// Fixed simulation parameter in place of the estimate.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta_tilde: Option<Vec<f64>>,
    /// Outer bootstrap replicates [default: 99 for corrected-bootstrap, else 400].
    #[arg(long)]
    pub boot_outer: Option<usize>,
    /// Inner replicates of the double bootstrap.
    #[arg(long, default_value_t = 25)]
    pub boot_inner: usize,
    #[command(flatten)]
    pub abc: AbcArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub model: ModelName,
    #[arg(long, value_enum)]
    pub axis: Axis,
    /// Axis values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub values: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 20)]
    pub m: usize,
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long = "R", default_value_t = 100)]
    pub reps: usize,
    /// True parameter [default: 0 for normal-location, 1 for normal-scale].
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CltArgs {
    #[arg(long, default_value_t = 20)]
    pub m: usize,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    /// Correction sizes to check, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2000")]
    pub n: Vec<usize>,
    /// Repetitions per n.
    #[arg(long = "R", default_value_t = 500)]
    pub reps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct AbcDemoArgs {
    /// Parameter generating the synthetic series (a,b,g,k,ma).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    /// Observed series file instead of synthetic data.
    #[arg(long, value_name = "FILE")]
    pub data: Option<PathBuf>,
    /// Series length of the synthetic data and of every simulation.
    #[arg(long, default_value_t = 50)]
    pub m: usize,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[command(flatten)]
    pub abc: AbcArgs,
    /// Acceptance fractions for the posterior-mean stability report.
    #[arg(long, value_delimiter = ',', default_value = "0.005,0.01,0.02,0.05")]
    pub ladder: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CorrectArgs {
    #[arg(long, value_enum)]
    pub model: ModelName,
    /// Observations separated by whitespace or commas.
    #[arg(long, value_name = "FILE")]
    pub data: PathBuf,
    /// corrected-pivot or corrected-bootstrap.
    #[arg(long, value_enum, default_value_t = MethodName::CorrectedPivot)]
    pub method: MethodName,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta_tilde: Option<Vec<f64>>,
    #[arg(long, default_value_t = 99)]
    pub boot_outer: usize,
    #[command(flatten)]
    pub abc: AbcArgs,
    #[command(flatten)]
    pub common: Common,
}
