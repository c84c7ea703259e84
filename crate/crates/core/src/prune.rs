//! Cardinality-constrained pruners.
//!
//! Each pruner returns a [`PrunedSet`]: the pruned universe `P`, the
//! structure it was assembled from, and the oracle queries it consumed.

use std::time::Instant;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{Oracle, OracleStats, SetFunction};
use crate::select::{greedy, threshold_greedy, GreedyRun};

/// Parameters a pruner ran with. Unused knobs stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PruneParams {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Number of disjoint runs for accuracy `epsilon`: `ceil(1 / epsilon)`.
pub fn ell_for_epsilon(epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::param(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    Ok((1.0 / epsilon - 1e-12).ceil() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowPick {
    /// Uniformly random member of the window; the variant the guarantee covers.
    Random,
    /// Best-marginal member of the window.
    Argmax,
}

/// How a pruned set was assembled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Structure {
    /// Pairwise-disjoint greedy runs `G_1..G_l`.
    DisjointRuns { runs: Vec<GreedyRun> },
    /// Committed picks `S_k` and every window `W_0..W_{k-1}`.
    Window {
        committed: Vec<usize>,
        windows: Vec<Vec<usize>>,
    },
    /// Threshold-greedy outputs `S_q` for every budget `q` of the grid.
    ThresholdGrid {
        epsilon: f64,
        grid: Vec<usize>,
        runs: Vec<Vec<usize>>,
    },
    Flat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrunedSet {
    pub algorithm: String,
    pub params: PruneParams,
    /// The pruned universe, sorted ascending.
    pub elements: Vec<usize>,
    pub structure: Structure,
    /// Declared size cap of the producing algorithm.
    pub cap: usize,
    pub stats: OracleStats,
    pub elapsed_secs: f64,
}

impl PrunedSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains_all(&self, set: &[usize]) -> bool {
        set.iter().all(|e| self.elements.binary_search(e).is_ok())
    }
}

struct Recorder<'a, F> {
    oracle: &'a Oracle<F>,
    before: OracleStats,
    start: Instant,
}

impl<'a, F: SetFunction> Recorder<'a, F> {
    fn start(oracle: &'a Oracle<F>) -> Self {
        Recorder {
            oracle,
            before: oracle.stats(),
            start: Instant::now(),
        }
    }

    fn finish(
        self,
        algorithm: &str,
        params: PruneParams,
        mut elements: Vec<usize>,
        structure: Structure,
        cap: usize,
    ) -> PrunedSet {
        elements.sort_unstable();
        elements.dedup();
        PrunedSet {
            algorithm: algorithm.to_string(),
            params,
            elements,
            structure,
            cap,
            stats: self.oracle.stats().since(self.before),
            elapsed_secs: self.start.elapsed().as_secs_f64(),
        }
    }
}

/// Sequential disjoint greedy: `ell` greedy runs of exactly `k` elements,
/// each on the ground set minus all earlier runs. When `n < ell * k` the
/// whole ground set is returned.
pub fn prune_seq_disjoint<F: SetFunction>(oracle: &Oracle<F>, k: usize, ell: usize) -> Result<PrunedSet> {
    if ell == 0 {
        return Err(Error::param("ell must be >= 1"));
    }
    let rec = Recorder::start(oracle);
    let n = oracle.ground_size();
    let params = PruneParams {
        k,
        ell: Some(ell),
        p: Some(ell * k),
        ..Default::default()
    };
    if k == 0 {
        return Ok(rec.finish("seq_disjoint", params, vec![], Structure::Flat, 0));
    }
    if n < ell * k {
        return Ok(rec.finish("seq_disjoint", params, (0..n).collect(), Structure::Flat, ell * k));
    }
    let mut available = vec![true; n];
    let mut runs = Vec::with_capacity(ell);
    for _ in 0..ell {
        let pool: Vec<usize> = (0..n).filter(|&e| available[e]).collect();
        let run = greedy(oracle, &pool, k);
        for &e in &run.picks {
            available[e] = false;
        }
        runs.push(run);
    }
    let elements = runs.iter().flat_map(|r| r.picks.iter().copied()).collect();
    Ok(rec.finish(
        "seq_disjoint",
        params,
        elements,
        Structure::DisjointRuns { runs },
        ell * k,
    ))
}

/// Window containment: for `k` rounds keep the top `omega * k` elements by
/// marginal gain against the committed set, then commit one of them.
/// Returns every window together with the committed picks.
pub fn prune_window<F: SetFunction>(
    oracle: &Oracle<F>,
    k: usize,
    omega: usize,
    pick: WindowPick,
    seed: u64,
) -> Result<PrunedSet> {
    if omega == 0 {
        return Err(Error::param("omega must be >= 1"));
    }
    let rec = Recorder::start(oracle);
    let n = oracle.ground_size();
    let name = match pick {
        WindowPick::Random => "window_rand",
        WindowPick::Argmax => "window_max",
    };
    let params = PruneParams {
        k,
        omega: Some(omega),
        seed: Some(seed),
        ..Default::default()
    };
    let cap = k + omega * k * k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = omega * k;
    let mut committed: Vec<usize> = Vec::with_capacity(k);
    let mut in_committed = vec![false; n];
    let mut windows = Vec::with_capacity(k);
    let mut kept = vec![false; n];
    for _ in 0..k {
        let remaining: Vec<usize> = (0..n).filter(|&e| !in_committed[e]).collect();
        if remaining.is_empty() {
            break;
        }
        let base = oracle.value(&committed);
        let mut scored: Vec<(usize, f64)> = remaining
            .iter()
            .map(|&e| {
                committed.push(e);
                let v = oracle.value(&committed);
                committed.pop();
                (e, v - base)
            })
            .collect();
        // stable: equal gains stay in ascending id order
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        scored.truncate(width.min(remaining.len()));
        let window: Vec<usize> = scored.iter().map(|&(e, _)| e).collect();
        let chosen = match pick {
            WindowPick::Argmax => window[0],
            WindowPick::Random => window[rng.gen_range(0..window.len())],
        };
        for &e in &window {
            kept[e] = true;
        }
        committed.push(chosen);
        in_committed[chosen] = true;
        windows.push(window);
    }
    let elements = (0..n).filter(|&e| kept[e] || in_committed[e]).collect();
    Ok(rec.finish(name, params, elements, Structure::Window { committed, windows }, cap))
}

/// One greedy run of `min(p, n)` steps.
pub fn prune_std_greedy<F: SetFunction>(oracle: &Oracle<F>, p: usize) -> Result<PrunedSet> {
    let rec = Recorder::start(oracle);
    let n = oracle.ground_size();
    let pool: Vec<usize> = (0..n).collect();
    let run = greedy(oracle, &pool, p);
    let params = PruneParams {
        k: p,
        p: Some(p),
        ..Default::default()
    };
    let elements = run.picks.clone();
    Ok(rec.finish(
        "std_greedy",
        params,
        elements,
        Structure::DisjointRuns { runs: vec![run] },
        p,
    ))
}

/// Budgets for the threshold grid: every size up to `ceil(1/eta)` plus the
/// geometric sizes `ceil((1 + eta)^j)`, all capped at `k`.
pub fn budget_grid(k: usize, eta: f64) -> Vec<usize> {
    if k == 0 {
        return Vec::new();
    }
    let small = ((1.0 / eta) - 1e-9).ceil() as usize;
    let mut grid: Vec<usize> = (1..=k.min(small)).collect();
    let steps = ((k as f64).ln() / (1.0 + eta).ln() - 1e-9).ceil().max(0.0) as i32;
    for j in 0..=steps {
        let q = ((1.0 + eta).powi(j) - 1e-9).ceil() as usize;
        grid.push(q.clamp(1, k));
    }
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Threshold greedy at every budget of [`budget_grid`] with `eta = epsilon/4`;
/// `P` is the union of the outputs. Intended for monotone objectives.
pub fn prune_fast_budget_range<F: SetFunction>(
    oracle: &Oracle<F>,
    k: usize,
    epsilon: f64,
) -> Result<PrunedSet> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::param(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    let rec = Recorder::start(oracle);
    let eta = epsilon / 4.0;
    let n = oracle.ground_size();
    let pool: Vec<usize> = (0..n).collect();
    let grid = budget_grid(k, eta);
    let mut runs = Vec::with_capacity(grid.len());
    for &q in &grid {
        runs.push(threshold_greedy(oracle, &pool, q, eta)?.picks);
    }
    let cap = grid.iter().sum();
    let elements = runs.iter().flatten().copied().collect();
    let params = PruneParams {
        k,
        epsilon: Some(epsilon),
        ..Default::default()
    };
    Ok(rec.finish(
        "fast_budget_range",
        params,
        elements,
        Structure::ThresholdGrid {
            epsilon,
            grid,
            runs,
        },
        cap,
    ))
}

/// An exact-size witness inside a threshold-grid pruned set: the run for
/// the smallest grid budget `q >= k'`, thinned to the best of
/// `ceil(4/epsilon)` uniformly random `k'`-subsets when it is too large.
pub fn witness<F: SetFunction>(
    pruned: &PrunedSet,
    oracle: &Oracle<F>,
    k_prime: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let Structure::ThresholdGrid { epsilon, grid, runs } = &pruned.structure else {
        return Err(Error::param("witness needs a threshold-grid pruned set"));
    };
    if k_prime > pruned.params.k {
        return Err(Error::param(format!(
            "k' = {k_prime} exceeds the pruning budget k = {}",
            pruned.params.k
        )));
    }
    if k_prime == 0 {
        return Ok(Vec::new());
    }
    let slot = grid
        .iter()
        .position(|&q| q >= k_prime)
        .expect("grid reaches k");
    let run = &runs[slot];
    if run.len() <= k_prime {
        return Ok(run.clone());
    }
    let retries = (4.0 / epsilon - 1e-9).ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..retries.max(1) {
        let mut pick: Vec<usize> = index::sample(&mut rng, run.len(), k_prime)
            .into_iter()
            .map(|i| run[i])
            .collect();
        pick.sort_unstable();
        let v = oracle.value(&pick);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, pick));
        }
    }
    Ok(best.expect("at least one retry").1)
}

/// Stream order for [`prune_threshold_stream`]: natural id order, or a seeded
/// shuffle of it.
pub fn stream_order(n: usize, shuffle_seed: Option<u64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    if let Some(seed) = shuffle_seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    order
}

/// Single-pass streaming threshold baseline.
///
/// Keeps the running best singleton gain `d` and accepts `e` when
/// `|P| < p` and `0 < f(e | P) >= epsilon * d / k`. A simple streaming
/// threshold rule used as a baseline; it carries no containment guarantee.
pub fn prune_threshold_stream<F: SetFunction>(
    oracle: &Oracle<F>,
    order: &[usize],
    k: usize,
    p: usize,
    epsilon: f64,
) -> Result<PrunedSet> {
    let n = oracle.ground_size();
    let mut seen = vec![false; n];
    for &e in order {
        if e >= n || std::mem::replace(&mut seen[e], true) {
            return Err(Error::param("stream order must be a permutation of the ground set"));
        }
    }
    if order.len() != n {
        return Err(Error::param("stream order must be a permutation of the ground set"));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::param("epsilon must be > 0"));
    }
    let rec = Recorder::start(oracle);
    let params = PruneParams {
        k,
        p: Some(p),
        epsilon: Some(epsilon),
        ..Default::default()
    };
    if k == 0 {
        return Ok(rec.finish("threshold_stream", params, vec![], Structure::Flat, 0));
    }
    let empty = oracle.value(&[]);
    let mut best_single = 0.0f64;
    let mut kept: Vec<usize> = Vec::new();
    let mut base = empty;
    for &e in order {
        if kept.len() >= p {
            break;
        }
        best_single = best_single.max(oracle.value(&[e]) - empty);
        kept.push(e);
        let v = oracle.value(&kept);
        let gain = v - base;
        if gain > 0.0 && gain >= epsilon * best_single / k as f64 {
            base = v;
        } else {
            kept.pop();
        }
    }
    Ok(rec.finish("threshold_stream", params, kept, Structure::Flat, p))
}

/// Uniform random `min(p, n)`-subset.
pub fn prune_random(n: usize, p: usize, seed: u64) -> PrunedSet {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let take = p.min(n);
    let mut elements = index::sample(&mut rng, n, take).into_vec();
    elements.sort_unstable();
    PrunedSet {
        algorithm: "random".into(),
        params: PruneParams {
            k: p,
            p: Some(p),
            seed: Some(seed),
            ..Default::default()
        },
        elements,
        structure: Structure::Flat,
        cap: p,
        stats: OracleStats::default(),
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

/// The whole ground set, `P = N`. No queries.
pub fn prune_full(n: usize, k: usize) -> PrunedSet {
    PrunedSet {
        algorithm: "full".into(),
        params: PruneParams {
            k,
            ..Default::default()
        },
        elements: (0..n).collect(),
        structure: Structure::Flat,
        cap: n,
        stats: OracleStats::default(),
        elapsed_secs: 0.0,
    }
}

/// Containment guaranteed by `ell` disjoint greedy runs on a non-negative
/// submodular objective: `(1 - 1/ell) / 2`.
pub fn sdg_guarantee(ell: usize) -> f64 {
    (1.0 - 1.0 / ell as f64) / 2.0
}

/// Expected containment of random-pick window pruning at finite `k`:
/// `(1 - 1/(omega k))^k / 2`.
pub fn window_guarantee(omega: usize, k: usize) -> f64 {
    (1.0 - 1.0 / (omega * k) as f64).powi(k as i32) / 2.0
}

/// Large-`k` limit of [`window_guarantee`]: `exp(-1/omega) / 2`.
pub fn window_guarantee_limit(omega: usize) -> f64 {
    (-1.0 / omega as f64).exp() / 2.0
}

/// The pruners by name, with a pruning multiplier `omega` mapped onto each
/// algorithm's own budget knob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    SeqDisjoint,
    WindowMax,
    WindowRand,
    ThresholdStream,
    StdGreedy,
    Random,
    FastBudgetRange,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::SeqDisjoint,
        Algorithm::WindowMax,
        Algorithm::WindowRand,
        Algorithm::ThresholdStream,
        Algorithm::StdGreedy,
        Algorithm::Random,
        Algorithm::FastBudgetRange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SeqDisjoint => "seq_disjoint",
            Algorithm::WindowMax => "window_max",
            Algorithm::WindowRand => "window_rand",
            Algorithm::ThresholdStream => "threshold_stream",
            Algorithm::StdGreedy => "std_greedy",
            Algorithm::Random => "random",
            Algorithm::FastBudgetRange => "fast_budget_range",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::param(format!("unknown algorithm {name:?}")))
    }

    /// Runs the pruner. `omega` sets `ell` for disjoint greedy, the window
    /// width, and `p = omega * k` for the size-budgeted baselines; `epsilon`
    /// feeds the threshold-based pruners.
    pub fn run<F: SetFunction>(
        self,
        oracle: &Oracle<F>,
        k: usize,
        omega: usize,
        epsilon: f64,
        seed: u64,
    ) -> Result<PrunedSet> {
        let n = oracle.ground_size();
        match self {
            Algorithm::SeqDisjoint => prune_seq_disjoint(oracle, k, omega),
            Algorithm::WindowMax => prune_window(oracle, k, omega, WindowPick::Argmax, seed),
            Algorithm::WindowRand => prune_window(oracle, k, omega, WindowPick::Random, seed),
            Algorithm::ThresholdStream => {
                prune_threshold_stream(oracle, &stream_order(n, None), k, omega * k, epsilon)
            }
            Algorithm::StdGreedy => prune_std_greedy(oracle, omega * k),
            Algorithm::Random => Ok(prune_random(n, omega * k, seed)),
            Algorithm::FastBudgetRange => prune_fast_budget_range(oracle, k, epsilon),
        }
    }
}
