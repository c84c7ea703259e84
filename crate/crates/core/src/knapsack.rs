//! Knapsack pruning: disjoint density-greedy runs and budget extraction.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::opt_knapsack;
use crate::objectives::{Oracle, OracleStats, SetFunction};
use crate::select::{density_greedy, DensityRun};

/// Largest pruned set [`extract_budget`] solves by enumeration.
pub const EXACT_EXTRACT_LIMIT: usize = 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    /// Cost per element id.
    pub costs: Vec<f64>,
    /// Largest budget the pruned set must serve.
    pub budget: f64,
}

impl KnapsackInstance {
    pub fn new(costs: Vec<f64>, budget: f64) -> Result<Self> {
        let inst = KnapsackInstance { costs, budget };
        inst.validate()?;
        Ok(inst)
    }

    /// Every cost must satisfy `0 < c <= budget`.
    pub fn validate(&self) -> Result<()> {
        if !(self.budget > 0.0 && self.budget.is_finite()) {
            return Err(Error::param(format!("budget must be > 0, got {}", self.budget)));
        }
        for (e, &c) in self.costs.iter().enumerate() {
            if !(c > 0.0 && c <= self.budget) {
                return Err(Error::param(format!(
                    "cost of element {e} must lie in (0, {}], got {c}",
                    self.budget
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn cost_of(&self, set: &[usize]) -> f64 {
        set.iter().map(|&e| self.costs[e]).sum()
    }

    /// `count` log-spaced budgets in `(budget / 10, budget]`, ascending.
    pub fn budget_grid(&self, count: usize) -> Vec<f64> {
        (1..=count)
            .map(|i| {
                let exp = (count - i) as f64 / count as f64;
                self.budget * 10f64.powf(-exp)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackPrunedSet {
    pub elements: Vec<usize>,
    pub runs: Vec<DensityRun>,
    pub budget: f64,
    pub ell: usize,
    /// Real cost of `elements`.
    pub total_cost: f64,
    /// Declared cost cap `3 * ell * budget`.
    pub cap: f64,
    pub stats: OracleStats,
    pub elapsed_secs: f64,
}

/// `ell` density-greedy runs on shrinking pools. Each run stops once it has
/// accepted cost `>= 2B` and never exceeds `3B`; elements accepted by a run
/// leave the pool for the later runs.
pub fn prune_sdg_density<F: SetFunction>(
    oracle: &Oracle<F>,
    instance: &KnapsackInstance,
    ell: usize,
) -> Result<KnapsackPrunedSet> {
    instance.validate()?;
    if ell == 0 {
        return Err(Error::param("ell must be >= 1"));
    }
    let n = oracle.ground_size();
    if instance.n() != n {
        return Err(Error::param(format!(
            "{} costs given for a ground set of {n}",
            instance.n()
        )));
    }
    let before = oracle.stats();
    let start = Instant::now();
    let b = instance.budget;
    let mut available = vec![true; n];
    let mut runs = Vec::with_capacity(ell);
    for _ in 0..ell {
        let pool: Vec<usize> = (0..n).filter(|&e| available[e]).collect();
        let run = density_greedy(oracle, &pool, &instance.costs, 2.0 * b, 3.0 * b)?;
        for &e in &run.picks {
            available[e] = false;
        }
        runs.push(run);
    }
    let mut elements: Vec<usize> = runs.iter().flat_map(|r| r.picks.iter().copied()).collect();
    elements.sort_unstable();
    let total_cost = instance.cost_of(&elements);
    Ok(KnapsackPrunedSet {
        elements,
        runs,
        budget: b,
        ell,
        total_cost,
        cap: 3.0 * ell as f64 * b,
        stats: oracle.stats().since(before),
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// A feasible set of cost `<= budget` drawn from `pruned`.
///
/// Small pruned sets are solved exactly. Larger ones take the better of a
/// density-greedy run capped at `budget` and the best affordable singleton.
/// Returns the set (sorted) and its value.
pub fn extract_budget<F: SetFunction + ?Sized>(
    f: &F,
    pruned: &[usize],
    costs: &[f64],
    budget: f64,
) -> Result<(Vec<usize>, f64)> {
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::param(format!("budget must be finite and >= 0, got {budget}")));
    }
    if pruned.len() <= EXACT_EXTRACT_LIMIT {
        let profile = opt_knapsack(f, pruned, costs, &[budget])?;
        return Ok((profile.argmax[0].clone(), profile.opt_by_budget[0]));
    }
    let run = density_greedy(f, pruned, costs, budget, budget)?;
    let mut best = run.picks;
    best.sort_unstable();
    let mut best_value = f.value(&best);
    for &e in pruned {
        if costs[e] <= budget * (1.0 + 1e-12) {
            let v = f.value(&[e]);
            if v > best_value {
                best_value = v;
                best = vec![e];
            }
        }
    }
    Ok((best, best_value))
}
