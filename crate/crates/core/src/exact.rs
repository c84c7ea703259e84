//! Brute-force optima over small universes.
//!
//! Subsets are visited depth-first in lexicographic order of their sorted
//! element lists, and an incumbent is only replaced by a strictly better
//! value, so the reported argmax is the lexicographically smallest optimum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::SetFunction;

/// Default cap on the number of subsets a single enumeration may visit.
pub const DEFAULT_GUARD: u128 = 100_000_000;

/// Enumerations larger than this are split across threads by leading element.
const PARALLEL_THRESHOLD: u128 = 200_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptProfile {
    /// Budgets in the order values are reported: `0..=k` for cardinality,
    /// the requested list for knapsack.
    pub budgets: Vec<f64>,
    pub opt_by_budget: Vec<f64>,
    pub argmax: Vec<Vec<usize>>,
    pub enumerated_count: u64,
}

impl OptProfile {
    /// `OPT_{k'}` for a cardinality profile.
    pub fn opt(&self, k_prime: usize) -> f64 {
        self.opt_by_budget[k_prime]
    }

    pub fn max_budget(&self) -> usize {
        self.opt_by_budget.len() - 1
    }
}

/// `sum_{j <= k} C(u, j)`, saturating.
pub fn subset_count(u: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for j in 0..=k.min(u) {
        total = total.saturating_add(c);
        c = c.saturating_mul((u - j) as u128) / (j as u128 + 1);
    }
    total
}

fn check_guard(count: u128, guard: u128) -> Result<()> {
    if count > guard {
        return Err(Error::GuardExceeded { count, guard });
    }
    Ok(())
}

fn sorted_universe(universe: &[usize]) -> Vec<usize> {
    let mut u = universe.to_vec();
    u.sort_unstable();
    u.dedup();
    u
}

struct Best {
    values: Vec<f64>,
    sets: Vec<Vec<usize>>,
    count: u64,
}

impl Best {
    fn new(slots: usize) -> Self {
        Best {
            values: vec![f64::NEG_INFINITY; slots],
            sets: vec![Vec::new(); slots],
            count: 0,
        }
    }

    fn offer(&mut self, slot: usize, v: f64, set: &[usize], tol: f64) {
        if v > self.values[slot] + tol || self.values[slot] == f64::NEG_INFINITY {
            self.values[slot] = v;
            self.sets[slot] = set.to_vec();
        }
    }

    /// Folds in results from a later (lexicographically greater) partition.
    fn merge(&mut self, later: Best, tol: f64) {
        self.count += later.count;
        for (slot, (v, s)) in later.values.into_iter().zip(later.sets).enumerate() {
            if v > self.values[slot] + tol
                || (self.values[slot] == f64::NEG_INFINITY && v > f64::NEG_INFINITY)
            {
                self.values[slot] = v;
                self.sets[slot] = s;
            }
        }
    }
}

fn card_dfs<F: SetFunction + ?Sized>(
    f: &F,
    universe: &[usize],
    start: usize,
    k: usize,
    current: &mut Vec<usize>,
    best: &mut Best,
    tol: f64,
) {
    let v = f.value(current);
    best.count += 1;
    for slot in current.len()..=k {
        best.offer(slot, v, current, tol);
    }
    if current.len() == k {
        return;
    }
    for i in start..universe.len() {
        current.push(universe[i]);
        card_dfs(f, universe, i + 1, k, current, best, tol);
        current.pop();
    }
}

/// Exact `OPT_{k'} = max_{T ⊆ universe, |T| <= k'} f(T)` for every `k' <= k`
/// in a single sweep, refusing when more than `guard` subsets would be
/// visited.
pub fn opt_cardinality_guarded<F: SetFunction + ?Sized>(
    f: &F,
    universe: &[usize],
    k: usize,
    guard: u128,
) -> Result<OptProfile> {
    let universe = sorted_universe(universe);
    let k_eff = k.min(universe.len());
    let count = subset_count(universe.len(), k_eff);
    check_guard(count, guard)?;
    let tol = f.tolerance();

    let best = if count > PARALLEL_THRESHOLD && k_eff > 0 {
        // The empty set, then one partition per leading element, merged in
        // lexicographic order.
        let mut head = Best::new(k_eff + 1);
        head.count = 1;
        let v0 = f.value(&[]);
        for slot in 0..=k_eff {
            head.offer(slot, v0, &[], tol);
        }
        let parts: Vec<Best> = (0..universe.len())
            .into_par_iter()
            .map(|lead| {
                let mut part = Best::new(k_eff + 1);
                let mut current = vec![universe[lead]];
                card_dfs(f, &universe, lead + 1, k_eff, &mut current, &mut part, tol);
                part
            })
            .collect();
        for part in parts {
            head.merge(part, tol);
        }
        head
    } else {
        let mut best = Best::new(k_eff + 1);
        let mut current = Vec::with_capacity(k_eff);
        card_dfs(f, &universe, 0, k_eff, &mut current, &mut best, tol);
        best
    };

    // Budgets beyond |universe| repeat the full-universe optimum.
    let mut values = best.values;
    let mut sets = best.sets;
    while values.len() < k + 1 {
        values.push(values[k_eff]);
        sets.push(sets[k_eff].clone());
    }
    Ok(OptProfile {
        budgets: (0..=k).map(|b| b as f64).collect(),
        opt_by_budget: values,
        argmax: sets,
        enumerated_count: best.count,
    })
}

pub fn opt_cardinality<F: SetFunction + ?Sized>(
    f: &F,
    universe: &[usize],
    k: usize,
) -> Result<OptProfile> {
    opt_cardinality_guarded(f, universe, k, DEFAULT_GUARD)
}

/// Every set `T ⊆ universe` with `|T| <= k` whose value is within the
/// objective's tolerance of `OPT_k`, in lexicographic order.
pub fn all_optima<F: SetFunction + ?Sized>(
    f: &F,
    universe: &[usize],
    k: usize,
    guard: u128,
) -> Result<Vec<Vec<usize>>> {
    let profile = opt_cardinality_guarded(f, universe, k, guard)?;
    let target = profile.opt(k);
    let tol = f.tolerance();
    let universe = sorted_universe(universe);
    let mut found = Vec::new();
    let mut current = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn walk<F: SetFunction + ?Sized>(
        f: &F,
        universe: &[usize],
        start: usize,
        k: usize,
        target: f64,
        tol: f64,
        current: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        if (f.value(current) - target).abs() <= tol {
            found.push(current.clone());
        }
        if current.len() == k {
            return;
        }
        for i in start..universe.len() {
            current.push(universe[i]);
            walk(f, universe, i + 1, k, target, tol, current, found);
            current.pop();
        }
    }
    walk(f, &universe, 0, k, target, tol, &mut current, &mut found);
    Ok(found)
}

/// Exact `OPT_{B'} = max_{T ⊆ universe, c(T) <= B'} f(T)` for every budget in
/// one sweep. `costs` is indexed by element id.
pub fn opt_knapsack_guarded<F: SetFunction + ?Sized>(
    f: &F,
    universe: &[usize],
    costs: &[f64],
    budgets: &[f64],
    guard: u128,
) -> Result<OptProfile> {
    let universe = sorted_universe(universe);
    if universe.len() >= 127 {
        return Err(Error::GuardExceeded {
            count: u128::MAX,
            guard,
        });
    }
    check_guard(1u128 << universe.len(), guard)?;
    for &e in &universe {
        match costs.get(e) {
            Some(&c) if c > 0.0 && c.is_finite() => {}
            _ => return Err(Error::param(format!("element {e} needs a positive cost"))),
        }
    }
    if budgets.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(Error::param("budgets must be finite and >= 0"));
    }
    let tol = f.tolerance();
    let top = budgets.iter().cloned().fold(0.0, f64::max) * (1.0 + 1e-12);
    let mut best = Best::new(budgets.len());

    #[allow(clippy::too_many_arguments)]
    fn dfs<F: SetFunction + ?Sized>(
        f: &F,
        universe: &[usize],
        costs: &[f64],
        budgets: &[f64],
        top: f64,
        start: usize,
        spent: f64,
        current: &mut Vec<usize>,
        best: &mut Best,
        tol: f64,
    ) {
        let v = f.value(current);
        best.count += 1;
        for (slot, &b) in budgets.iter().enumerate() {
            if spent <= b * (1.0 + 1e-12) {
                best.offer(slot, v, current, tol);
            }
        }
        for i in start..universe.len() {
            let e = universe[i];
            let next = spent + costs[e];
            if next > top {
                continue;
            }
            current.push(e);
            dfs(f, universe, costs, budgets, top, i + 1, next, current, best, tol);
            current.pop();
        }
    }

    let mut current = Vec::new();
    dfs(
        f, &universe, costs, budgets, top, 0, 0.0, &mut current, &mut best, tol,
    );
    Ok(OptProfile {
        budgets: budgets.to_vec(),
        opt_by_budget: best.values,
        argmax: best.sets,
        enumerated_count: best.count,
    })
}

pub fn opt_knapsack<F: SetFunction + ?Sized>(
    f: &F,
    universe: &[usize],
    costs: &[f64],
    budgets: &[f64],
) -> Result<OptProfile> {
    opt_knapsack_guarded(f, universe, costs, budgets, DEFAULT_GUARD)
}
