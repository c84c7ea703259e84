use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ratio;
use crate::error::{Error, Result};
use crate::exact::{all_optima, opt_cardinality_guarded};
use crate::instances::{gen_interference_with, InterferenceParams};
use crate::objectives::{InterferenceCoverage, Oracle, SetFunction};
use crate::prune::{prune_seq_disjoint, prune_std_greedy, PrunedSet};
use crate::select::{greedy_with, GreedyOptions};

/// How a `k`-subset is extracted from a pruned set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractRule {
    /// Greedy for exactly `min(k, |P|)` steps.
    Full,
    /// Greedy that stops once no remaining element has positive gain.
    StopAtZero,
    /// Best subset of size `<= k` inside `P`, by enumeration.
    Exact,
}

impl ExtractRule {
    fn options(self) -> GreedyOptions {
        GreedyOptions {
            stop_at_zero: self == ExtractRule::StopAtZero,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "full" => Ok(ExtractRule::Full),
            "stop_at_zero" => Ok(ExtractRule::StopAtZero),
            "exact" => Ok(ExtractRule::Exact),
            other => Err(Error::param(format!("unknown extraction rule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationConfig {
    pub params: InterferenceParams,
    pub trials: usize,
    pub k: usize,
    pub omega: usize,
    /// Trial `i` uses instance seed `seed + i`.
    pub seed: u64,
    pub extract: ExtractRule,
    pub guard: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationTrial {
    pub instance_seed: u64,
    pub opt: f64,
    pub optimum: Vec<usize>,
    pub optima_count: usize,
    pub greedy_contains: bool,
    pub sdg_contains: bool,
    pub greedy_contains_any: bool,
    pub sdg_contains_any: bool,
    /// Value extracted from the greedy-pruned set.
    pub greedy_value: f64,
    /// Value extracted from the disjoint-greedy-pruned set.
    pub sdg_value: f64,
    /// Value of greedy with budget `k` on the full ground set.
    pub greedy_k_value: f64,
    pub alpha_greedy: f64,
    pub alpha_sdg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationRates {
    pub trials: usize,
    pub greedy_k_subopt: f64,
    /// The canonical optimum lies inside `P`.
    pub greedy_contain: f64,
    pub sdg_contain: f64,
    /// Some optimum lies inside `P`.
    pub greedy_contain_any: f64,
    pub sdg_contain_any: f64,
    /// Trials where the disjoint-greedy extraction is strictly better.
    pub value_separations: usize,
    pub value_separation_rate: f64,
    /// Trials where the greedy extraction is strictly better.
    pub reverse_separations: usize,
    /// Largest `(sdg_value - greedy_value) / OPT_k`.
    pub max_gap: f64,
    pub mean_alpha_greedy: f64,
    pub mean_alpha_sdg: f64,
}

fn extract(f: &InterferenceCoverage, pruned: &PrunedSet, k: usize, rule: ExtractRule, guard: u128) -> Result<f64> {
    if rule == ExtractRule::Exact {
        return best_inside(f, pruned, k, guard);
    }
    let run = greedy_with(f, &pruned.elements, k, rule.options());
    Ok(f.value(&run.picks))
}

fn best_inside(f: &InterferenceCoverage, pruned: &PrunedSet, k: usize, guard: u128) -> Result<f64> {
    Ok(opt_cardinality_guarded(f, &pruned.elements, k, guard)?.opt(k))
}

fn run_trial(config: &SeparationConfig, i: usize) -> Result<SeparationTrial> {
    let instance_seed = config.seed.wrapping_add(i as u64);
    let guard = config.guard as u128;
    let f = gen_interference_with(&config.params, instance_seed)?;
    let k = config.k;
    let universe: Vec<usize> = (0..f.ground_size()).collect();
    let profile = opt_cardinality_guarded(&f, &universe, k, guard)?;
    let opt = profile.opt(k);
    let optimum = profile.argmax[k].clone();
    let optima = all_optima(&f, &universe, k, guard)?;

    let oracle = Oracle::new(&f);
    let p_greedy = prune_std_greedy(&oracle, config.omega * k)?;
    let p_sdg = prune_seq_disjoint(&oracle, k, config.omega)?;
    let greedy_k = greedy_with(&f, &universe, k, config.extract.options());
    Ok(SeparationTrial {
        instance_seed,
        opt,
        greedy_contains: p_greedy.contains_all(&optimum),
        sdg_contains: p_sdg.contains_all(&optimum),
        greedy_contains_any: optima.iter().any(|o| p_greedy.contains_all(o)),
        sdg_contains_any: optima.iter().any(|o| p_sdg.contains_all(o)),
        optima_count: optima.len(),
        optimum,
        greedy_value: extract(&f, &p_greedy, k, config.extract, guard)?,
        sdg_value: extract(&f, &p_sdg, k, config.extract, guard)?,
        greedy_k_value: f.value(&greedy_k.picks),
        alpha_greedy: ratio(best_inside(&f, &p_greedy, k, guard)?, opt),
        alpha_sdg: ratio(best_inside(&f, &p_sdg, k, guard)?, opt),
    })
}

/// Per-trial outcomes of the greedy-versus-disjoint-greedy comparison.
pub fn separation_trials(config: &SeparationConfig) -> Result<Vec<SeparationTrial>> {
    if config.trials == 0 {
        return Err(Error::param("separation study needs at least one trial"));
    }
    if config.k == 0 || config.omega == 0 {
        return Err(Error::param("separation study needs k >= 1 and omega >= 1"));
    }
    config.params.validate()?;
    (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(config, i))
        .collect()
}

pub fn summarize(trials: &[SeparationTrial]) -> SeparationRates {
    let n = trials.len() as f64;
    let rate = |pred: &dyn Fn(&SeparationTrial) -> bool| trials.iter().filter(|t| pred(t)).count() as f64 / n;
    let tol = 1e-9;
    let wins = trials.iter().filter(|t| t.sdg_value > t.greedy_value + tol).count();
    let losses = trials.iter().filter(|t| t.greedy_value > t.sdg_value + tol).count();
    let max_gap = trials
        .iter()
        .filter(|t| t.opt > 0.0)
        .map(|t| (t.sdg_value - t.greedy_value) / t.opt)
        .fold(0.0, f64::max);
    SeparationRates {
        trials: trials.len(),
        greedy_k_subopt: rate(&|t| t.greedy_k_value < t.opt - tol),
        greedy_contain: rate(&|t| t.greedy_contains),
        sdg_contain: rate(&|t| t.sdg_contains),
        greedy_contain_any: rate(&|t| t.greedy_contains_any),
        sdg_contain_any: rate(&|t| t.sdg_contains_any),
        value_separations: wins,
        value_separation_rate: wins as f64 / n,
        reverse_separations: losses,
        max_gap,
        mean_alpha_greedy: trials.iter().map(|t| t.alpha_greedy).sum::<f64>() / n,
        mean_alpha_sdg: trials.iter().map(|t| t.alpha_sdg).sum::<f64>() / n,
    }
}

/// Containment and extracted-value comparison of one greedy run of size
/// `omega * k` against `omega` disjoint greedy runs of size `k`, on random
/// interference-coverage instances.
pub fn separation_study(config: &SeparationConfig) -> Result<SeparationRates> {
    Ok(summarize(&separation_trials(config)?))
}
