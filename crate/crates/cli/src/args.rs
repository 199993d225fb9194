use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use momentum_core::{Coupling, Format, RelativeGainMode};

#[derive(Debug, Parser)]
#[command(name = "momentum", version, about = "Rank changing entities by momentum")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the momentum leaders (Pareto frontier).
    Leaders {
        #[command(flatten)]
        input: InputArgs,
        /// Also print this many layers in total, peeling off each frontier.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        layers: u64,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Sortscan)]
        algorithm: AlgorithmArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Markdown)]
        format: FormatArg,
    },
    /// Order leaders by the weight of the entities they dominate.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = FormatArg::Markdown)]
        format: FormatArg,
    },
    /// Score a system by the weighted relative gain of its leaders.
    Momentousness {
        #[command(flatten)]
        input: InputArgs,
        /// Pre-computed leader list with columns `r,w` (and optionally `id`).
        #[arg(long, conflicts_with_all = ["gains", "before", "after"])]
        leaders_csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Markdown)]
        format: FormatArg,
    },
    /// Compare the momentousness of two systems.
    Compare {
        #[arg(long, conflicts_with = "leaders_csv_a")]
        gains_a: Option<PathBuf>,
        #[arg(long)]
        leaders_csv_a: Option<PathBuf>,
        #[arg(long, conflicts_with = "leaders_csv_b")]
        gains_b: Option<PathBuf>,
        #[arg(long)]
        leaders_csv_b: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Markdown)]
        format: FormatArg,
    },
    /// Monte Carlo study of frontier size under power-law gains.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        x_min: f64,
        /// Upper cutoff; defaults to n * x_min.
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long, value_enum, default_value_t = CouplingArg::Independent)]
        coupling: CouplingArg,
        #[arg(long, value_delimiter = ',', default_value = "95,99")]
        percentiles: Vec<f64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Markdown)]
        format: FormatArg,
    },
    /// Compare frontier size with the count of relative-gain records.
    VerifyBound {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = FormatArg::Markdown)]
        format: FormatArg,
    },
}

/// Either a gains table or a pair of snapshots.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Gains table with header `id[,score],g,r`.
    #[arg(long, conflicts_with_all = ["before", "after"])]
    pub gains: Option<PathBuf>,
    /// Snapshot at the start of the window (CSV `id,score` or JSON).
    #[arg(long, requires = "after")]
    pub before: Option<PathBuf>,
    /// Snapshot at the end of the window.
    #[arg(long, requires = "before")]
    pub after: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Ratio)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Ratio,
    ShareDelta,
}

impl From<ModeArg> for RelativeGainMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ratio => RelativeGainMode::Ratio,
            ModeArg::ShareDelta => RelativeGainMode::ShareDelta,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Markdown,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Markdown => Format::Markdown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Sortscan,
    Bruteforce,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CouplingArg {
    Independent,
    Permutation,
}

impl From<CouplingArg> for Coupling {
    fn from(c: CouplingArg) -> Self {
        match c {
            CouplingArg::Independent => Coupling::Independent,
            CouplingArg::Permutation => Coupling::Permutation,
        }
    }
}
