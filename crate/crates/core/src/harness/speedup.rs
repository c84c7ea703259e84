use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::ratio;
use crate::error::Result;
use crate::exact::{opt_cardinality_guarded, subset_count, OptProfile};
use crate::objectives::SetFunction;
use crate::prune::PrunedSet;

const REPEATS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedupReport {
    pub n: usize,
    pub pruned_size: usize,
    pub k: usize,
    pub t_full: f64,
    pub t_pruned: f64,
    pub ratio: f64,
    /// `OPT_k` inside `P` over `OPT_k` on `N`; absent when the full
    /// enumeration was capped.
    pub alpha: Option<f64>,
    /// The full enumeration exceeded the guard and ran on the largest id
    /// prefix of `N` that fits; `ratio` is then a lower bound.
    pub full_capped: bool,
    pub full_subsets: u128,
    pub pruned_subsets: u128,
}

fn timed<F: SetFunction + ?Sized>(f: &F, universe: &[usize], k: usize, guard: u128) -> Result<(f64, OptProfile)> {
    let mut times = Vec::with_capacity(REPEATS);
    let mut profile = None;
    for _ in 0..REPEATS {
        let start = Instant::now();
        let p = opt_cardinality_guarded(f, universe, k, guard)?;
        times.push(start.elapsed().as_secs_f64());
        profile = Some(p);
    }
    times.sort_by(f64::total_cmp);
    Ok((times[REPEATS / 2], profile.expect("at least one repeat")))
}

/// Wall-clock ratio of exact extraction on `N` versus on `P` (median of
/// three runs each, same enumeration engine).
pub fn speedup_probe<F: SetFunction + ?Sized>(f: &F, pruned: &PrunedSet, k: usize, guard: u128) -> Result<SpeedupReport> {
    let n = f.ground_size();
    let (t_pruned, inside) = timed(f, &pruned.elements, k, guard)?;
    let mut width = n;
    while width > 0 && subset_count(width, k) > guard {
        width -= 1;
    }
    let full_capped = width < n;
    let universe: Vec<usize> = (0..width).collect();
    let (t_full, full) = timed(f, &universe, k, guard)?;
    Ok(SpeedupReport {
        n,
        pruned_size: pruned.len(),
        k,
        t_full,
        t_pruned,
        ratio: t_full / t_pruned.max(1e-9),
        alpha: (!full_capped).then(|| ratio(inside.opt(k), full.opt(k))),
        full_capped,
        full_subsets: subset_count(width, k),
        pruned_subsets: subset_count(pruned.len(), k),
    })
}
