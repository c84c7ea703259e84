use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "prunekit", version, about = "Containment pruning for submodular maximization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Prune an instance and report the pruned set.
    Prune(PruneArgs),
    /// Prune and measure containment against a reference.
    Eval(EvalArgs),
    /// Containment over an algorithm x omega x seed grid.
    Sweep(SweepArgs),
    /// Submodularity and monotonicity checks.
    Check(CheckArgs),
    /// Greedy versus disjoint-greedy separation study.
    Separation(SeparationArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FamilyArg {
    Gnm,
    Planted,
    Interference,
    Similarity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ObjectiveArg {
    Cut,
    Coverage,
    FacilityLocation,
    Proxy,
    RestrictedFl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ReferenceArg {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ExtractArg {
    Full,
    StopAtZero,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum GenFormat {
    Json,
    Edges,
}

/// Generator parameters shared by `gen` and `sweep`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct FamilyArgs {
    /// Generator family.
    #[arg(long)]
    pub family: Option<FamilyArg>,
    /// Ground-set size (columns for similarity matrices).
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge count for gnm.
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of planted communities.
    #[arg(long, default_value_t = 20)]
    pub communities: usize,
    /// Planted community size instead of a count; sets communities = ceil(n / size).
    #[arg(long, conflicts_with = "communities")]
    pub community_size: Option<usize>,
    #[arg(long, default_value_t = prunekit_core::instances::PLANTED_P_IN)]
    pub p_in: f64,
    #[arg(long, default_value_t = prunekit_core::instances::PLANTED_P_OUT)]
    pub p_out: f64,
    /// Interference universe size.
    #[arg(long, default_value_t = prunekit_core::instances::DEFAULT_INTERFERENCE_UNIVERSE)]
    pub universe: usize,
    /// Interference pair probability.
    #[arg(long, default_value_t = 0.25)]
    pub pair_prob: f64,
    /// Similarity rows (covered points).
    #[arg(long, default_value_t = 50)]
    pub rows: usize,
}

/// How the objective is supplied.
#[derive(Debug, Clone, Args, Serialize)]
pub struct InstanceArgs {
    /// JSON objective (as written by `gen`) or generator spec
    /// (`{"family": ..., "seed": ...}`).
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Objective family built from the file flags below.
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveArg>,
    /// Edge list `u v [w]`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Coverage list `elem: item item ...`.
    #[arg(long)]
    pub cover: Option<PathBuf>,
    /// Similarity matrix CSV, rows = covered points.
    #[arg(long)]
    pub sim: Option<PathBuf>,
    /// Penalty CSV `size,theta` for the proxy objective.
    #[arg(long)]
    pub penalty: Option<PathBuf>,
    /// Shift the proxy by its lower bound so it is non-negative.
    #[arg(long)]
    pub shift: bool,
    /// Relevance per similarity row, one value per line.
    #[arg(long)]
    pub rel: Option<PathBuf>,
    /// Relevance gate for restricted facility location.
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Enumeration guard (max subsets per exact solve).
    #[arg(long, env = "PRUNEKIT_GUARD", default_value_t = prunekit_core::DEFAULT_GUARD as u64)]
    pub guard: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PruneParamsArgs {
    /// Pruning algorithm.
    #[arg(long, default_value = "seq_disjoint")]
    pub algo: String,
    /// Cardinality budget; not used with --costs.
    #[arg(long)]
    pub k: Option<usize>,
    /// Pruning multiplier: window width and p = omega * k.
    #[arg(long, default_value_t = 2)]
    pub omega: usize,
    /// Disjoint runs; defaults to omega.
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Seeds: `3`, `1,5,9` or `0..10`.
    #[arg(long, default_value = "0")]
    pub seeds: String,
    /// Costs CSV `element,cost`; switches to knapsack pruning.
    #[arg(long)]
    pub costs: Option<PathBuf>,
    /// Knapsack budget B.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Number of log-spaced evaluation budgets in (B/10, B].
    #[arg(long, default_value_t = 8)]
    pub budgets_grid: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = GenFormat::Json)]
    pub format: GenFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PruneArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub params: PruneParamsArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub params: PruneParamsArgs,
    #[arg(long, value_enum, default_value_t = ReferenceArg::Exact)]
    pub reference: ReferenceArg,
    /// Evaluate P = N instead of running a pruner.
    #[arg(long)]
    pub full: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Base generator seed; sweep seed s generates instance seed + s.
    #[arg(long, default_value_t = 0)]
    pub instance_seed: u64,
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Comma-separated algorithms.
    #[arg(long, default_value = "seq_disjoint,window_max,random")]
    pub algo: String,
    #[arg(long)]
    pub k: usize,
    /// Comma-separated omegas.
    #[arg(long, default_value = "2")]
    pub omega: String,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value = "0..5")]
    pub seeds: String,
    #[arg(long, value_enum, default_value_t = ReferenceArg::Exact)]
    pub reference: ReferenceArg,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Also write the aggregate table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Also write the aggregates as one JSON document.
    #[arg(long)]
    pub aggregate: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Random nested pairs when the ground set is too large to enumerate.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeparationArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub omega: usize,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, default_value_t = prunekit_core::instances::DEFAULT_INTERFERENCE_UNIVERSE)]
    pub universe: usize,
    #[arg(long, default_value_t = 0.25)]
    pub pair_prob: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ExtractArg::Full)]
    pub extract: ExtractArg,
    /// Also write one record per trial.
    #[arg(long)]
    pub per_trial: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}
