//! Containment evaluation and the experiment drivers built on it.

mod separation;
mod speedup;
mod stats;
mod sweep;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{opt_cardinality_guarded, subset_count, OptProfile};
use crate::objectives::{Oracle, OracleStats, SetFunction};
use crate::prune::PrunedSet;
use crate::select::greedy;

pub use separation::{separation_study, separation_trials, summarize, ExtractRule, SeparationConfig, SeparationRates, SeparationTrial};
pub use speedup::{speedup_probe, SpeedupReport};
pub use stats::{mean_std, paired_bootstrap, BootstrapCi};
pub use sweep::{sweep, InstanceSource, SweepCell, SweepConfig, SweepResult, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMode {
    /// `OPT_{k'}` by exhaustive enumeration over `N`.
    Exact,
    /// Best greedy prefix of size `<= k'` on `N`; ratios may exceed 1.
    Greedy,
}

impl ReferenceMode {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "exact" => Ok(ReferenceMode::Exact),
            "greedy" => Ok(ReferenceMode::Greedy),
            other => Err(Error::param(format!("unknown reference mode {other:?}"))),
        }
    }
}

/// Denominators `ref[k']` for `k' = 0..=k` plus the sets achieving them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub mode: ReferenceMode,
    pub values: Vec<f64>,
    pub sets: Vec<Vec<usize>>,
}

/// Best value of a prefix of length `<= j` for every `j = 0..=k`.
fn best_prefixes<F: SetFunction + ?Sized>(f: &F, pool: &[usize], k: usize) -> (Vec<f64>, Vec<Vec<usize>>) {
    let run = greedy(f, pool, k);
    let base = f.value(&[]);
    let mut values = Vec::with_capacity(k + 1);
    let mut sets = Vec::with_capacity(k + 1);
    let (mut best, mut best_len) = (base, 0);
    for j in 0..=k {
        let len = j.min(run.picks.len());
        let v = run.prefix_value(base, len);
        if v > best {
            best = v;
            best_len = len;
        }
        values.push(best);
        let mut set = run.picks[..best_len].to_vec();
        set.sort_unstable();
        sets.push(set);
    }
    (values, sets)
}

impl Reference {
    pub fn compute<F: SetFunction + ?Sized>(f: &F, k: usize, mode: ReferenceMode, guard: u128) -> Result<Self> {
        let universe: Vec<usize> = (0..f.ground_size()).collect();
        match mode {
            ReferenceMode::Exact => Ok(Reference::from_profile(&opt_cardinality_guarded(f, &universe, k, guard)?)),
            ReferenceMode::Greedy => {
                let (values, sets) = best_prefixes(f, &universe, k);
                Ok(Reference { mode, values, sets })
            }
        }
    }

    pub fn from_profile(profile: &OptProfile) -> Self {
        Reference {
            mode: ReferenceMode::Exact,
            values: profile.opt_by_budget.clone(),
            sets: profile.argmax.clone(),
        }
    }

    pub fn max_budget(&self) -> usize {
        self.values.len() - 1
    }
}

/// The best set found inside `P` for one budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestInside {
    pub value: f64,
    pub set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub algorithm: String,
    pub k: usize,
    pub reference: ReferenceMode,
    /// `alpha[k' - 1]` for `k' = 1..=k`.
    pub alpha_by_budget: Vec<f64>,
    pub reference_values: Vec<f64>,
    pub best_inside: Vec<BestInside>,
    /// Whether the reference set for `k'` lies inside `P`.
    pub reference_contained: Vec<bool>,
    /// Set when the inside-`P` search fell back to greedy.
    pub inside_by_greedy: bool,
    /// Set when some ratio exceeds 1, which only a greedy reference allows.
    pub exceeds_one: bool,
    pub pruned_size: usize,
    pub prune_stats: OracleStats,
    pub prune_secs: f64,
    pub extract_stats: OracleStats,
    pub extract_secs: f64,
}

impl ContainmentReport {
    /// `alpha(k)` at the full budget; 1 when `k = 0`.
    pub fn alpha(&self) -> f64 {
        self.alpha_by_budget.last().copied().unwrap_or(1.0)
    }

    pub fn min_alpha(&self) -> f64 {
        self.alpha_by_budget.iter().copied().fold(1.0, f64::min)
    }
}

/// `value / reference`, with a non-positive reference counting as full
/// containment.
pub fn ratio(value: f64, reference: f64) -> f64 {
    if reference <= 0.0 {
        1.0
    } else {
        value / reference
    }
}

/// Containment of `pruned` against a precomputed reference.
///
/// Inside `P` the optimum is enumerated exactly when the guard allows it
/// and approximated by greedy prefixes otherwise; an exact reference makes
/// that fallback an error.
pub fn containment_report_with<F: SetFunction + ?Sized>(
    f: &F,
    pruned: &PrunedSet,
    k: usize,
    reference: &Reference,
    guard: u128,
) -> Result<ContainmentReport> {
    if reference.max_budget() < k {
        return Err(Error::param(format!(
            "reference covers budgets up to {}, need {k}",
            reference.max_budget()
        )));
    }
    let start = Instant::now();
    let counted = Oracle::unmemoized(f);
    let exact_inside = subset_count(pruned.len(), k) <= guard;
    if !exact_inside && reference.mode == ReferenceMode::Exact {
        return Err(Error::GuardExceeded {
            count: subset_count(pruned.len(), k),
            guard,
        });
    }
    let (inside_values, inside_sets) = if exact_inside {
        let p = opt_cardinality_guarded(&counted, &pruned.elements, k, guard)?;
        (p.opt_by_budget, p.argmax)
    } else {
        best_prefixes(&counted, &pruned.elements, k)
    };
    let extract_stats = counted.stats();
    let extract_secs = start.elapsed().as_secs_f64();

    let mut alpha_by_budget = Vec::with_capacity(k);
    let mut best_inside = Vec::with_capacity(k);
    let mut reference_contained = Vec::with_capacity(k);
    for kp in 1..=k {
        alpha_by_budget.push(ratio(inside_values[kp], reference.values[kp]));
        best_inside.push(BestInside {
            value: inside_values[kp],
            set: inside_sets[kp].clone(),
        });
        reference_contained.push(pruned.contains_all(&reference.sets[kp]));
    }
    let exceeds_one = alpha_by_budget.iter().any(|&a| a > 1.0 + 1e-12);
    Ok(ContainmentReport {
        algorithm: pruned.algorithm.clone(),
        k,
        reference: reference.mode,
        alpha_by_budget,
        reference_values: reference.values[1..=k].to_vec(),
        best_inside,
        reference_contained,
        inside_by_greedy: !exact_inside,
        exceeds_one,
        pruned_size: pruned.len(),
        prune_stats: pruned.stats,
        prune_secs: pruned.elapsed_secs,
        extract_stats,
        extract_secs,
    })
}

/// `alpha(k')` for `k' = 1..=k`: the best set of size `<= k'` inside `P`
/// relative to the chosen reference on `N`.
pub fn containment_report<F: SetFunction + ?Sized>(
    f: &F,
    pruned: &PrunedSet,
    k: usize,
    mode: ReferenceMode,
    guard: u128,
) -> Result<ContainmentReport> {
    let reference = Reference::compute(f, k, mode, guard)?;
    containment_report_with(f, pruned, k, &reference, guard)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::DEFAULT_GUARD;
    use crate::objectives::{Coverage, Cut};
    use crate::prune::{prune_random, prune_seq_disjoint};

    fn triangle() -> Cut {
        Cut::new(3, vec![(0, 1), (1, 2), (0, 2)], None).unwrap()
    }

    #[test]
    fn full_prune_has_alpha_one() {
        let f = Cut::new(6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (1, 4)], None).unwrap();
        let p = prune_random(6, 6, 1);
        let r = containment_report(&f, &p, 3, ReferenceMode::Exact, DEFAULT_GUARD).unwrap();
        assert_eq!(r.alpha_by_budget, vec![1.0, 1.0, 1.0]);
        assert!(r.reference_contained.iter().all(|&c| c));
        assert!(!r.exceeds_one);
    }

    #[test]
    fn zero_function_is_vacuously_contained() {
        let f = Coverage::modular(&[0.0; 5]).unwrap();
        let p = prune_random(5, 1, 0);
        let r = containment_report(&f, &p, 2, ReferenceMode::Exact, DEFAULT_GUARD).unwrap();
        assert_eq!(r.alpha_by_budget, vec![1.0, 1.0]);
    }

    #[test]
    fn partial_prune_ratio() {
        let f = Coverage::modular(&[4.0, 1.0, 3.0]).unwrap();
        let mut p = prune_random(3, 3, 0);
        p.elements = vec![1, 2];
        let r = containment_report(&f, &p, 2, ReferenceMode::Exact, DEFAULT_GUARD).unwrap();
        assert_eq!(r.alpha_by_budget, vec![0.75, 4.0 / 7.0]);
        assert_eq!(r.reference_contained, vec![false, false]);
        assert_eq!(r.best_inside[0].set, vec![2]);
    }

    #[test]
    fn greedy_reference_may_exceed_one() {
        // greedy takes the hub first and is stuck below the optimum
        let f = Coverage::new(6, vec![vec![0, 1, 2, 3], vec![0, 1, 4], vec![2, 3, 5]], None).unwrap();
        let mut p = prune_random(3, 3, 0);
        p.elements = vec![1, 2];
        let r = containment_report(&f, &p, 2, ReferenceMode::Greedy, DEFAULT_GUARD).unwrap();
        assert!(r.exceeds_one);
        assert!(r.alpha() > 1.0);
        let exact = containment_report(&f, &p, 2, ReferenceMode::Exact, DEFAULT_GUARD).unwrap();
        assert_eq!(exact.alpha(), 1.0);
    }

    #[test]
    fn guard_applies_in_exact_mode() {
        let f = triangle();
        let o = Oracle::new(f.clone());
        let p = prune_seq_disjoint(&o, 1, 1).unwrap();
        assert!(matches!(
            containment_report(&f, &p, 1, ReferenceMode::Exact, 2),
            Err(Error::GuardExceeded { .. })
        ));
        let big = prune_random(3, 3, 0);
        let r = containment_report(&f, &big, 2, ReferenceMode::Greedy, 3).unwrap();
        assert!(r.inside_by_greedy);
    }

    #[test]
    fn reference_must_cover_k() {
        let f = triangle();
        let reference = Reference::compute(&f, 1, ReferenceMode::Exact, DEFAULT_GUARD).unwrap();
        let p = prune_random(3, 3, 0);
        assert!(containment_report_with(&f, &p, 2, &reference, DEFAULT_GUARD).is_err());
        assert!(ReferenceMode::parse("exact").is_ok());
        assert!(ReferenceMode::parse("oracle").is_err());
    }
}
