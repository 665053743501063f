// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use driftsplit::InterpMode;

#[derive(Debug, Parser)]
#[command(
    name = "driftsplit",
    version,
    about = "Split a time series into two minimum-drift envelopes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal split of one series, written as CSV.
    Split(SplitArgs),
    /// Nested bands from repeated splitting, written as CSV.
    Bands(BandsArgs),
    /// Generate a synthetic series.
    Gen(GenArgs),
    /// Survivor-count benchmark; one JSON line per trial.
    Bench(BenchArgs),
    /// SVG chart of a series and its bands.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Interp {
    Hold,
    Linear,
}

impl From<Interp> for InterpMode {
    fn from(i: Interp) -> Self {
        match i {
            Interp::Hold => InterpMode::Hold,
            Interp::Linear => InterpMode::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessName {
    Uniform,
    Normal,
    Expo,
    Walk,
    Gwalk,
    Records,
}

impl ProcessName {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Normal => "normal",
            Self::Expo => "expo",
            Self::Walk => "walk",
            Self::Gwalk => "gwalk",
            Self::Records => "records",
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output CSV; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "linear")]
    pub interp: Interp,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "linear")]
    pub interp: Interp,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
}

#[derive(Debug, Args)]
pub struct ProcessArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    pub process: ProcessName,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probability of a new maximum (records process).
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    /// Probability of a new minimum (records process).
    #[arg(long, default_value_t = 0.1)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    /// Series length.
    #[arg(long = "T", value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub len: u64,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Process family; every family when omitted.
    #[arg(long, value_enum)]
    pub process: Option<ProcessName>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    #[arg(long, default_value_t = 0.1)]
    pub q: f64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Comma-separated series lengths.
    #[arg(long, value_delimiter = ',', default_value = "1024,2048,4096")]
    pub sizes: Vec<usize>,
    /// Record per-trial wall-clock time (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
    /// JSON-lines output; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "linear")]
    pub interp: Interp,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
}
