use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "hypoexp",
    version,
    about = "Hypoexponential and EME distribution toolkit"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for every random stream (default 20240601).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML configuration file; flags take precedence over its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Append wall-clock runtime to the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate pdf and cdf at one or more points.
    Eval(EvalArgs),
    /// Draw a random sample.
    Sample(SampleArgs),
    /// Fit a distribution by maximum likelihood.
    Fit(FitArgs),
    /// Test a sample for exponentiality.
    Gof(GofArgs),
    /// Run the identity verification suites.
    Verify(VerifyArgs),
    /// Simulate absorption times of a sequential stage chain.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct DistArgs {
    /// Family: exp, erlang, hypo or eme.
    #[arg(long = "dist")]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub w: Option<f64>,
    /// Stage rates for the hypo family.
    #[arg(long, value_delimiter = ',')]
    pub rates: Option<Vec<f64>>,
    /// JSON parameter record `{"family": .., "n": .., "lambda": .., "w": .., "rates": [..]}`.
    #[arg(long)]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    /// Evaluation points.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long)]
    pub count: Option<usize>,
    /// Output file; values go to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Sample file: one value per line, or CSV with `--column`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// CSV column holding the observations.
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Family to fit: exp, erlang or eme.
    #[arg(long, default_value = "eme")]
    pub family: String,
    /// Fixed stage count.
    #[arg(long, conflicts_with = "search")]
    pub n: Option<u32>,
    /// Try every stage count up to this bound (eme only).
    #[arg(long)]
    pub search: Option<u32>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GofArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub w: Option<f64>,
    /// Bootstrap replicates.
    #[arg(long = "B")]
    pub bootstrap: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long)]
    pub grid_decay: Option<f64>,
    /// Write the residual profile `t residual` to this file.
    #[arg(long)]
    pub residuals: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    Default,
    Quick,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub max_n: Option<u32>,
    #[arg(long)]
    pub max_m: Option<u32>,
    #[arg(long)]
    pub random_v: Option<usize>,
    #[arg(long, value_enum)]
    pub sweep: Option<Sweep>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    /// Stage rates in visiting order.
    #[arg(long, value_delimiter = ',')]
    pub stages: Option<Vec<f64>>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Skip the comparison against the closed-form law.
    #[arg(long)]
    pub no_validate: bool,
}
