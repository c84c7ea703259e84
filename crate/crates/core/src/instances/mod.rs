//! Instance generators, file formats, and the penalty fitter.

mod io;
mod penalty_fit;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{Cut, FacilityLocation, InterferenceCoverage, ObjectiveSpec};

pub use io::{
    format_costs_csv, format_coverage_list, format_edge_list, format_penalty_csv,
    format_similarity_csv, load_costs_csv, load_coverage_list, load_edge_list, load_penalty_csv,
    load_similarity_csv, parse_costs_csv, parse_coverage_list, parse_edge_list, parse_penalty_csv,
    parse_similarity_csv, EdgeList,
};
pub use penalty_fit::{fit_penalty, pava_nonincreasing};

/// Universe size used for interference-coverage instances when none is given.
/// Calibrated so the `n = 20, k = 3, omega = 2` ensemble lands near the
/// target containment rates of 60% (greedy) and 78% (disjoint greedy).
pub const DEFAULT_INTERFERENCE_UNIVERSE: usize = 35;

/// Uniform simple graph on `n` vertices with exactly `m` edges.
pub fn gen_gnm(n: usize, m: usize, seed: u64) -> Result<EdgeList> {
    let total = n * n.saturating_sub(1) / 2;
    if m > total {
        return Err(Error::param(format!(
            "G({n}, {m}) has more edges than the {total} vertex pairs"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, total, m).into_vec();
    picked.sort_unstable();
    let mut edges = Vec::with_capacity(m);
    let (mut row, mut row_start) = (0usize, 0usize);
    for idx in picked {
        while idx >= row_start + (n - 1 - row) {
            row_start += n - 1 - row;
            row += 1;
        }
        edges.push((row, row + 1 + idx - row_start));
    }
    Ok(EdgeList {
        n,
        edges,
        weights: None,
    })
}

/// Default intra-block edge probability of [`gen_planted`] (an invented default).
pub const PLANTED_P_IN: f64 = 0.3;
/// Default inter-block edge probability of [`gen_planted`] (an invented default).
pub const PLANTED_P_OUT: f64 = 0.05;

/// Planted partition graph with `communities` blocks of size
/// `ceil(n / communities)` (the last block takes the remainder).
pub fn gen_planted(n: usize, communities: usize, p_in: f64, p_out: f64, seed: u64) -> Result<EdgeList> {
    if communities == 0 || communities > n.max(1) {
        return Err(Error::param(format!(
            "need 1 <= communities <= n, got {communities} for n = {n}"
        )));
    }
    for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("{name} must lie in [0, 1], got {p}")));
        }
    }
    let block = n.div_ceil(communities).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if u / block == v / block { p_in } else { p_out };
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(EdgeList {
        n,
        edges,
        weights: None,
    })
}

/// Dense similarity matrix with entries uniform in `[0, 1)`.
pub fn gen_similarity(rows: usize, cols: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if rows == 0 || cols == 0 {
        return Err(Error::param("similarity matrix needs at least one row and column"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..rows)
        .map(|_| (0..cols).map(|_| rng.gen::<f64>()).collect())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceParams {
    pub n: usize,
    pub universe_m: usize,
    pub cover_min: usize,
    pub cover_max: usize,
    pub pair_prob: f64,
    pub intensity_lo: f64,
    pub intensity_hi: f64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
}

impl InterferenceParams {
    pub fn new(n: usize, universe_m: usize) -> Self {
        InterferenceParams {
            n,
            universe_m,
            cover_min: 3,
            cover_max: 8,
            pair_prob: 0.25,
            intensity_lo: 1.0,
            intensity_hi: 5.0,
            lambda_lo: 0.5,
            lambda_hi: 2.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cover_min > self.cover_max || self.cover_max > self.universe_m {
            return Err(Error::param(format!(
                "need cover_min <= cover_max <= universe_m, got {} / {} / {}",
                self.cover_min, self.cover_max, self.universe_m
            )));
        }
        if !(0.0..=1.0).contains(&self.pair_prob) {
            return Err(Error::param(format!("pair_prob must lie in [0, 1], got {}", self.pair_prob)));
        }
        if !(0.0 <= self.intensity_lo && self.intensity_lo <= self.intensity_hi) {
            return Err(Error::param("need 0 <= intensity_lo <= intensity_hi"));
        }
        if !(0.0 <= self.lambda_lo && self.lambda_lo <= self.lambda_hi) {
            return Err(Error::param("need 0 <= lambda_lo <= lambda_hi"));
        }
        Ok(())
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

/// Random interference-coverage objective.
///
/// Element `i` covers a uniform subset of `[m]` whose size is uniform on
/// `cover_min..=cover_max`; each pair interferes with probability
/// `pair_prob` at an intensity uniform on `[intensity_lo, intensity_hi)`,
/// and `lambda` is uniform on `[lambda_lo, lambda_hi)`.
pub fn gen_interference_with(params: &InterferenceParams, seed: u64) -> Result<InterferenceCoverage> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let covers = (0..params.n)
        .map(|_| {
            let size = rng.gen_range(params.cover_min..=params.cover_max);
            let mut c = index::sample(&mut rng, params.universe_m, size).into_vec();
            c.sort_unstable();
            c
        })
        .collect();
    let mut intf = Vec::new();
    for i in 0..params.n {
        for j in i + 1..params.n {
            if rng.gen_bool(params.pair_prob) {
                intf.push((i, j, uniform(&mut rng, params.intensity_lo, params.intensity_hi)));
            }
        }
    }
    let lambda = uniform(&mut rng, params.lambda_lo, params.lambda_hi);
    InterferenceCoverage::new(params.universe_m, covers, intf, lambda)
}

pub fn gen_interference(n: usize, universe_m: usize, seed: u64) -> Result<InterferenceCoverage> {
    if universe_m < 8 {
        return Err(Error::param(format!("universe_m must be >= 8, got {universe_m}")));
    }
    gen_interference_with(&InterferenceParams::new(n, universe_m), seed)
}

/// A generator family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Gnm {
        n: usize,
        m: usize,
    },
    Planted {
        n: usize,
        communities: usize,
        #[serde(default = "default_p_in")]
        p_in: f64,
        #[serde(default = "default_p_out")]
        p_out: f64,
    },
    Interference(InterferenceParams),
    Similarity {
        rows: usize,
        cols: usize,
    },
}

fn default_p_in() -> f64 {
    PLANTED_P_IN
}

fn default_p_out() -> f64 {
    PLANTED_P_OUT
}

/// Seeded generator spec. Building it twice gives the same objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub family: Family,
    pub seed: u64,
}

impl GenSpec {
    pub fn with_seed(&self, seed: u64) -> GenSpec {
        GenSpec {
            family: self.family.clone(),
            seed,
        }
    }

    pub fn n(&self) -> usize {
        match &self.family {
            Family::Gnm { n, .. } | Family::Planted { n, .. } => *n,
            Family::Interference(p) => p.n,
            Family::Similarity { cols, .. } => *cols,
        }
    }

    /// Generated objective: cut for graphs, facility location for
    /// similarity matrices.
    pub fn build(&self) -> Result<ObjectiveSpec> {
        Ok(match &self.family {
            Family::Gnm { n, m } => ObjectiveSpec::Cut(gen_gnm(*n, *m, self.seed)?.into_cut()?),
            Family::Planted {
                n,
                communities,
                p_in,
                p_out,
            } => ObjectiveSpec::Cut(
                gen_planted(*n, *communities, *p_in, *p_out, self.seed)?.into_cut()?,
            ),
            Family::Interference(p) => {
                ObjectiveSpec::InterferenceCoverage(gen_interference_with(p, self.seed)?)
            }
            Family::Similarity { rows, cols } => ObjectiveSpec::FacilityLocation(
                FacilityLocation::new(gen_similarity(*rows, *cols, self.seed)?)?,
            ),
        })
    }
}

impl EdgeList {
    pub fn into_cut(self) -> Result<Cut> {
        Cut::new(self.n, self.edges, self.weights)
    }
}
