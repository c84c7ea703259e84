//! Selection engines shared by the pruners.
//!
//! All scans visit candidates in ascending id order and only replace the
//! incumbent on a strictly better score, so ties go to the lowest id and
//! every run is a deterministic function of its inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::SetFunction;

/// Transcript of a greedy-style run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyRun {
    pub picks: Vec<usize>,
    /// `gains[i] = f(picks[i] | picks[..i])`.
    pub gains: Vec<f64>,
    pub pool: Vec<usize>,
}

impl GreedyRun {
    fn empty(pool: Vec<usize>) -> Self {
        GreedyRun {
            picks: Vec::new(),
            gains: Vec::new(),
            pool,
        }
    }

    /// `f` of the first `len` picks, rebuilt from the recorded gains.
    pub fn prefix_value(&self, base: f64, len: usize) -> f64 {
        base + self.gains[..len.min(self.gains.len())].iter().sum::<f64>()
    }
}

/// Transcript of a density-greedy run under a cost cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRun {
    pub picks: Vec<usize>,
    pub gains: Vec<f64>,
    pub costs: Vec<f64>,
    /// `gains[i] / costs[i]` at pick time.
    pub densities: Vec<f64>,
    /// Elements rejected because they would overflow the keep cap.
    pub skipped: Vec<usize>,
    /// Real cost accepted into the run.
    pub accepted_cost: f64,
    /// Virtual zero-value padding that brings the run up to the stop cost.
    pub dummy_cost: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyOptions {
    /// Stop as soon as the best marginal gain is `<= 0`. Off by default: the
    /// disjoint-run analysis needs runs of exactly the requested size.
    pub stop_at_zero: bool,
}

fn sorted_pool(pool: &[usize]) -> Vec<usize> {
    let mut p = pool.to_vec();
    p.sort_unstable();
    p.dedup();
    p
}

/// Standard greedy: repeatedly add the argmax-marginal element of the pool,
/// continuing through negative gains, until `min(size, |pool|)` picks.
pub fn greedy<F: SetFunction + ?Sized>(f: &F, pool: &[usize], size: usize) -> GreedyRun {
    greedy_with(f, pool, size, GreedyOptions::default())
}

pub fn greedy_with<F: SetFunction + ?Sized>(
    f: &F,
    pool: &[usize],
    size: usize,
    opts: GreedyOptions,
) -> GreedyRun {
    let pool = sorted_pool(pool);
    let mut run = GreedyRun::empty(pool.clone());
    if size == 0 || pool.is_empty() {
        return run;
    }
    let mut remaining = pool;
    let mut current: Vec<usize> = Vec::with_capacity(size + 1);
    let mut base = f.value(&current);
    while run.picks.len() < size && !remaining.is_empty() {
        let mut best: Option<(usize, f64, f64)> = None;
        for (idx, &e) in remaining.iter().enumerate() {
            current.push(e);
            let v = f.value(&current);
            current.pop();
            let gain = v - base;
            if best.is_none_or(|(_, g, _)| gain > g) {
                best = Some((idx, gain, v));
            }
        }
        let (idx, gain, v) = best.expect("non-empty remaining pool");
        if opts.stop_at_zero && gain <= 0.0 {
            break;
        }
        let e = remaining.remove(idx);
        current.push(e);
        run.picks.push(e);
        run.gains.push(gain);
        base = v;
    }
    run
}

/// Decreasing-threshold greedy for monotone objectives.
///
/// Starts at the best singleton gain `d`, sweeps the pool accepting any
/// element whose marginal is at least the threshold, and lowers the
/// threshold by a factor `1 - eta` until it falls below `(eta / |pool|) d`
/// or `size` elements are taken.
pub fn threshold_greedy<F: SetFunction + ?Sized>(
    f: &F,
    pool: &[usize],
    size: usize,
    eta: f64,
) -> Result<GreedyRun> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param(format!("eta must lie in (0, 1), got {eta}")));
    }
    let pool = sorted_pool(pool);
    let mut run = GreedyRun::empty(pool.clone());
    if size == 0 || pool.is_empty() {
        return Ok(run);
    }
    let mut current: Vec<usize> = Vec::with_capacity(size + 1);
    let mut base = f.value(&current);
    let top = pool
        .iter()
        .map(|&e| f.value(&[e]) - base)
        .fold(f64::NEG_INFINITY, f64::max);
    if top <= 0.0 {
        return Ok(run);
    }
    let floor = eta / pool.len() as f64 * top;
    let mut taken = vec![false; pool.len()];
    let mut threshold = top;
    while threshold >= floor && run.picks.len() < size {
        for (idx, &e) in pool.iter().enumerate() {
            if run.picks.len() == size {
                break;
            }
            if taken[idx] {
                continue;
            }
            current.push(e);
            let v = f.value(&current);
            let gain = v - base;
            if gain >= threshold {
                taken[idx] = true;
                run.picks.push(e);
                run.gains.push(gain);
                base = v;
            } else {
                current.pop();
            }
        }
        threshold *= 1.0 - eta;
    }
    Ok(run)
}

/// Density greedy under a knapsack cap.
///
/// Repeatedly takes the remaining element with the best `f(u | A) / cost(u)`.
/// It is accepted if the accepted cost stays within `keep_cap`, otherwise it
/// is skipped for good. The run stops once the accepted cost reaches
/// `stop_cost`; if the pool runs dry first, the shortfall is recorded as
/// virtual dummy cost. `costs` is indexed by element id.
pub fn density_greedy<F: SetFunction + ?Sized>(
    f: &F,
    pool: &[usize],
    costs: &[f64],
    stop_cost: f64,
    keep_cap: f64,
) -> Result<DensityRun> {
    if !(stop_cost >= 0.0 && stop_cost <= keep_cap && keep_cap.is_finite()) {
        return Err(Error::param(format!(
            "need 0 <= stop_cost <= keep_cap, got {stop_cost} and {keep_cap}"
        )));
    }
    let pool = sorted_pool(pool);
    for &e in &pool {
        let c = *costs.get(e).ok_or_else(|| {
            Error::param(format!("no cost given for element {e}"))
        })?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::param(format!("cost of element {e} must be > 0, got {c}")));
        }
    }
    let cap = keep_cap * (1.0 + 1e-12);
    let mut run = DensityRun {
        picks: Vec::new(),
        gains: Vec::new(),
        costs: Vec::new(),
        densities: Vec::new(),
        skipped: Vec::new(),
        accepted_cost: 0.0,
        dummy_cost: 0.0,
    };
    let mut remaining = pool;
    let mut current: Vec<usize> = Vec::new();
    let mut base = f.value(&current);
    while run.accepted_cost < stop_cost {
        let mut best: Option<(usize, f64, f64, f64)> = None;
        for (idx, &e) in remaining.iter().enumerate() {
            current.push(e);
            let v = f.value(&current);
            current.pop();
            let gain = v - base;
            let density = gain / costs[e];
            if best.is_none_or(|(_, d, _, _)| density > d) {
                best = Some((idx, density, gain, v));
            }
        }
        let Some((idx, density, gain, v)) = best else {
            run.dummy_cost = stop_cost - run.accepted_cost;
            break;
        };
        let e = remaining.remove(idx);
        if run.accepted_cost + costs[e] <= cap {
            current.push(e);
            run.picks.push(e);
            run.gains.push(gain);
            run.costs.push(costs[e]);
            run.densities.push(density);
            run.accepted_cost += costs[e];
            base = v;
        } else {
            run.skipped.push(e);
        }
    }
    Ok(run)
}
