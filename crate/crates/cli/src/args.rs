use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Wrapper feature selection with HHO, SSA and the HHOSSA hybrid.
///
/// Without a subcommand the run flags are accepted directly, e.g.
/// `swarmselect --algo hhossa --dataset d.csv --seed 7`.
#[derive(Debug, Parser)]
#[command(name = "swarmselect", version, args_conflicts_with_subcommands = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run feature-selection experiments (the default).
    Run(Box<RunArgs>),
    /// Write a synthetic benchmark dataset with known informative features.
    GenSynthetic(SyntheticArgs),
}

#[derive(Debug, Clone, Default, Parser)]
pub struct RunArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Label column name or zero-based index (default: last column).
    #[arg(long)]
    pub label_column: Option<String>,
    /// Optimizer(s): hhossa, hho, ssa. Repeat or comma-separate for several.
    #[arg(long)]
    pub algo: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Main-loop iterations (HHO / HHOSSA outer loop, standalone SSA).
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Inner SSA iterations per HHOSSA iteration.
    #[arg(long)]
    pub ssa_iterations: Option<usize>,
    /// Population size for every optimizer.
    #[arg(long)]
    pub population: Option<usize>,
    /// Chain length for standalone SSA (overrides --population for SSA).
    #[arg(long)]
    pub ssa_population: Option<usize>,
    /// Neighbors used by the KNN classifier.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub train_fraction: Option<f64>,
    /// Share of the training portion held out for fitness evaluation.
    #[arg(long)]
    pub validation_fraction: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Weight on classification error in the fitness.
    #[arg(long)]
    pub fitness_a: Option<f64>,
    /// Weight on the selected-feature ratio in the fitness.
    #[arg(long)]
    pub fitness_b: Option<f64>,
    /// Binarization threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lb: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ub: Option<f64>,
    /// Label value treated as the positive class (default: second in sorted order).
    #[arg(long)]
    pub positive_label: Option<String>,
    /// Skip min-max feature scaling.
    #[arg(long)]
    pub no_scale: bool,
    /// Output directory (default: results).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Number of consecutive seeds to run.
    #[arg(long)]
    pub repeat: Option<usize>,
    /// TOML file mirroring the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SyntheticArgs {
    /// Destination CSV.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 5)]
    pub informative: usize,
    #[arg(long, default_value_t = 15)]
    pub noise: usize,
    /// Class-mean gap of each informative feature, in standard deviations.
    #[arg(long, default_value_t = 2.0)]
    pub separation: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
