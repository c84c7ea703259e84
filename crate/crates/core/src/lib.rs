//! Containment pruning for submodular maximization.
//!
//! A pruner shrinks the ground set `N` to a core `P` such that, for every
//! downstream budget `k' <= k` (or knapsack budget `B' <= B`), some feasible
//! subset of `P` is within a factor `alpha` of the optimum over all of `N`.
//!
//! * [`objectives`]: the set-function contract, built-in families, query
//!   accounting and property checkers.
//! * [`select`]: greedy, decreasing-threshold greedy and density greedy.
//! * [`prune`]: cardinality pruners (sequential disjoint greedy, window
//!   containment, threshold grid, baselines).
//! * [`knapsack`]: density-greedy pruning under a knapsack budget.
//! * [`exact`]: brute-force optima used as the containment denominator.
//! * [`harness`]: containment reports, sweeps, separation study, bootstrap.
//! * [`instances`]: generators, file formats and penalty fitting.

pub mod error;
pub mod exact;
pub mod harness;
pub mod instances;
pub mod knapsack;
pub mod objectives;
pub mod prune;
pub mod select;

pub use error::{Error, Result};
pub use exact::{opt_cardinality, opt_knapsack, OptProfile, DEFAULT_GUARD};
pub use harness::{containment_report, ContainmentReport, ReferenceMode};
pub use knapsack::{extract_budget, prune_sdg_density, KnapsackInstance, KnapsackPrunedSet};
pub use objectives::{
    eval, marginal, GroundSet, ObjectiveSpec, Oracle, OracleStats, PenaltyCurve, SetFunction,
};
pub use prune::{PruneParams, PrunedSet, Structure};
pub use select::{DensityRun, GreedyRun};
