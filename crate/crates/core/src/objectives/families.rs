use serde::{Deserialize, Serialize};

use super::{Members, PenaltyCurve, SetFunction, REAL_TOLERANCE};
use crate::error::{Error, Result};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidObjective(msg.into())
}

fn check_weight(what: &str, i: usize, w: f64) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(bad(format!("{what}[{i}] = {w} must be finite and >= 0")));
    }
    Ok(())
}

/// Weighted coverage: `f(S) = sum of weights of universe items covered by S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub universe: usize,
    pub covers: Vec<Vec<usize>>,
    /// Per-universe-item weights; `None` means unit weights (integer valued).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Coverage {
    pub fn new(universe: usize, covers: Vec<Vec<usize>>, weights: Option<Vec<f64>>) -> Result<Self> {
        let c = Coverage {
            universe,
            covers,
            weights,
        };
        c.validate()?;
        Ok(c)
    }

    /// A modular function: element `i` alone covers an item of weight `weights[i]`.
    pub fn modular(weights: &[f64]) -> Result<Self> {
        let covers = (0..weights.len()).map(|i| vec![i]).collect();
        Coverage::new(weights.len(), covers, Some(weights.to_vec()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.covers.is_empty() {
            return Err(bad("coverage needs at least one element"));
        }
        for (e, items) in self.covers.iter().enumerate() {
            if let Some(&i) = items.iter().find(|&&i| i >= self.universe) {
                return Err(bad(format!(
                    "element {e} covers item {i} outside universe of size {}",
                    self.universe
                )));
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.universe {
                return Err(bad(format!(
                    "{} weights for universe of size {}",
                    w.len(),
                    self.universe
                )));
            }
            for (i, &x) in w.iter().enumerate() {
                check_weight("weight", i, x)?;
            }
        }
        Ok(())
    }

    fn covered(&self, set: &[usize]) -> Vec<bool> {
        let mut hit = vec![false; self.universe];
        for &e in set {
            for &i in &self.covers[e] {
                hit[i] = true;
            }
        }
        hit
    }
}

impl SetFunction for Coverage {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn value(&self, set: &[usize]) -> f64 {
        let hit = self.covered(set);
        match &self.weights {
            None => hit.iter().filter(|&&h| h).count() as f64,
            Some(w) => hit.iter().zip(w).filter(|(h, _)| **h).map(|(_, w)| w).sum(),
        }
    }

    fn is_integral(&self) -> bool {
        self.weights.is_none()
    }
}

/// Graph cut: total weight of edges with exactly one endpoint in `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Cut {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, weights: Option<Vec<f64>>) -> Result<Self> {
        let c = Cut { n, edges, weights };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(bad("cut objective needs at least one vertex"));
        }
        for &(u, v) in &self.edges {
            if u >= self.n || v >= self.n {
                return Err(bad(format!("edge ({u},{v}) outside 0..{}", self.n)));
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.edges.len() {
                return Err(bad(format!(
                    "{} weights for {} edges",
                    w.len(),
                    self.edges.len()
                )));
            }
            for (i, &x) in w.iter().enumerate() {
                check_weight("edge weight", i, x)?;
            }
        }
        Ok(())
    }
}

impl SetFunction for Cut {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[usize]) -> f64 {
        let m = Members::new(self.n, set);
        match &self.weights {
            None => self
                .edges
                .iter()
                .filter(|&&(u, v)| m.contains(u) != m.contains(v))
                .count() as f64,
            Some(w) => self
                .edges
                .iter()
                .zip(w)
                .filter(|(&(u, v), _)| m.contains(u) != m.contains(v))
                .map(|(_, w)| w)
                .sum(),
        }
    }

    fn is_integral(&self) -> bool {
        self.weights.is_none()
    }
}

/// Facility location `FL(S) = sum_v max_{s in S} sim(v, s)`; rows are covered
/// points, columns are ground-set elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacilityLocation {
    pub sim: Vec<Vec<f64>>,
}

impl FacilityLocation {
    pub fn new(sim: Vec<Vec<f64>>) -> Result<Self> {
        let fl = FacilityLocation { sim };
        fl.validate()?;
        Ok(fl)
    }

    pub fn validate(&self) -> Result<()> {
        validate_matrix(&self.sim)
    }

    pub fn columns(&self) -> usize {
        self.sim[0].len()
    }
}

fn validate_matrix(sim: &[Vec<f64>]) -> Result<()> {
    let Some(first) = sim.first() else {
        return Err(bad("similarity matrix needs at least one row"));
    };
    if first.is_empty() {
        return Err(bad("similarity matrix needs at least one column"));
    }
    for (r, row) in sim.iter().enumerate() {
        if row.len() != first.len() {
            return Err(bad(format!(
                "row {r} has {} columns, expected {}",
                row.len(),
                first.len()
            )));
        }
        for (c, &x) in row.iter().enumerate() {
            if !x.is_finite() || x < 0.0 {
                return Err(bad(format!("sim[{r}][{c}] = {x} must be finite and >= 0")));
            }
        }
    }
    Ok(())
}

fn row_max(row: &[f64], set: &[usize]) -> f64 {
    set.iter().map(|&s| row[s]).fold(0.0, f64::max)
}

impl SetFunction for FacilityLocation {
    fn ground_size(&self) -> usize {
        self.columns()
    }

    fn value(&self, set: &[usize]) -> f64 {
        self.sim.iter().map(|row| row_max(row, set)).sum()
    }
}

/// Largest ground set for which proxy non-negativity is certified by
/// enumerating every subset.
pub const PROXY_EXACT_LIMIT: usize = 20;

/// Non-monotone proxy `FL(S) - theta(|S|) + shift`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proxy {
    pub fl: FacilityLocation,
    pub penalty: PenaltyCurve,
    /// Constant added to every value; zero unless requested at construction.
    #[serde(default)]
    pub shift: f64,
}

impl Proxy {
    /// Builds the proxy and certifies non-negativity.
    ///
    /// With `shift = false` the instance must already be non-negative: for
    /// `n <= PROXY_EXACT_LIMIT` this is checked on every subset, above it only
    /// `theta(n) <= FL(N)` is required. With `shift = true` the constant
    /// `max(0, -lower)` is added, where `lower` is the exact minimum for small
    /// `n` and `-theta(n)` otherwise.
    pub fn new(fl: FacilityLocation, penalty: PenaltyCurve, shift: bool) -> Result<Self> {
        fl.validate()?;
        let n = fl.columns();
        if penalty.max_size() < n {
            return Err(bad(format!(
                "penalty table has {} entries, needs n + 1 = {}",
                penalty.max_size() + 1,
                n + 1
            )));
        }
        let mut proxy = Proxy {
            fl,
            penalty,
            shift: 0.0,
        };
        let lower = proxy.lower_bound();
        if shift {
            proxy.shift = (-lower).max(0.0);
        } else {
            proxy.check_nonnegative(lower)?;
        }
        Ok(proxy)
    }

    pub fn validate(&self) -> Result<()> {
        self.fl.validate()?;
        let n = self.fl.columns();
        if self.penalty.max_size() < n {
            return Err(bad("penalty table shorter than n + 1"));
        }
        if !self.shift.is_finite() || self.shift < 0.0 {
            return Err(bad("proxy shift must be finite and >= 0"));
        }
        self.check_nonnegative(self.lower_bound() + self.shift)
    }

    fn check_nonnegative(&self, lower: f64) -> Result<()> {
        let n = self.fl.columns();
        if n <= PROXY_EXACT_LIMIT {
            if lower < -REAL_TOLERANCE {
                return Err(bad(format!(
                    "proxy takes negative value {lower}; construct with shift"
                )));
            }
        } else {
            let full: Vec<usize> = (0..n).collect();
            let top = self.fl.value(&full) + self.shift;
            if self.penalty.at(n) > top + REAL_TOLERANCE {
                return Err(bad(format!(
                    "theta(n) = {} exceeds FL(N) = {top}",
                    self.penalty.at(n)
                )));
            }
        }
        Ok(())
    }

    /// Lower bound on `FL(S) - theta(|S|)` (without shift): exact when
    /// `n <= PROXY_EXACT_LIMIT`, `-theta(n)` otherwise.
    pub fn lower_bound(&self) -> f64 {
        let n = self.fl.columns();
        if n > PROXY_EXACT_LIMIT {
            return -self.penalty.at(n);
        }
        // FL over every mask, one row at a time: best(mask) = max(best(mask
        // without lowest bit), sim[lowest bit]).
        let size = 1usize << n;
        let mut total = vec![0.0f64; size];
        let mut best = vec![0.0f64; size];
        for row in &self.fl.sim {
            for mask in 1..size {
                let low = mask.trailing_zeros() as usize;
                best[mask] = best[mask & (mask - 1)].max(row[low]);
                total[mask] += best[mask];
            }
        }
        (0..size)
            .map(|mask| total[mask] - self.penalty.at(mask.count_ones() as usize))
            .fold(f64::INFINITY, f64::min)
    }
}

impl SetFunction for Proxy {
    fn ground_size(&self) -> usize {
        self.fl.columns()
    }

    fn value(&self, set: &[usize]) -> f64 {
        self.fl.value(set) - self.penalty.at(set.len()) + self.shift
    }
}

/// Facility location restricted to rows whose relevance exceeds `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedFacilityLocation {
    pub sim: Vec<Vec<f64>>,
    pub rel: Vec<f64>,
    pub tau: f64,
}

impl RestrictedFacilityLocation {
    pub fn new(sim: Vec<Vec<f64>>, rel: Vec<f64>, tau: f64) -> Result<Self> {
        let r = RestrictedFacilityLocation { sim, rel, tau };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        validate_matrix(&self.sim)?;
        if self.rel.len() != self.sim.len() {
            return Err(bad(format!(
                "{} relevance scores for {} rows",
                self.rel.len(),
                self.sim.len()
            )));
        }
        if self.rel.iter().any(|r| !r.is_finite()) || !self.tau.is_finite() {
            return Err(bad("relevance scores and tau must be finite"));
        }
        Ok(())
    }

    /// Rows that pass the relevance gate.
    pub fn active_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.sim
            .iter()
            .zip(&self.rel)
            .filter(|(_, &r)| r > self.tau)
            .map(|(row, _)| row.as_slice())
    }
}

impl SetFunction for RestrictedFacilityLocation {
    fn ground_size(&self) -> usize {
        self.sim[0].len()
    }

    fn value(&self, set: &[usize]) -> f64 {
        self.active_rows().map(|row| row_max(row, set)).sum()
    }
}

/// Coverage minus pairwise interference:
/// `f(S) = |U_{i in S} C_i| - lambda * sum_{i<j in S} intf(i, j)`.
///
/// Values can be negative when interference dominates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceCoverage {
    pub universe: usize,
    pub covers: Vec<Vec<usize>>,
    /// Sparse symmetric interference as `(i, j, intensity)` with `i < j`.
    pub intf: Vec<(usize, usize, f64)>,
    pub lambda: f64,
}

impl InterferenceCoverage {
    pub fn new(
        universe: usize,
        covers: Vec<Vec<usize>>,
        intf: Vec<(usize, usize, f64)>,
        lambda: f64,
    ) -> Result<Self> {
        let mut canonical: Vec<(usize, usize, f64)> = intf
            .into_iter()
            .map(|(i, j, w)| if i < j { (i, j, w) } else { (j, i, w) })
            .collect();
        canonical.sort_by_key(|a| (a.0, a.1));
        let f = InterferenceCoverage {
            universe,
            covers,
            intf: canonical,
            lambda,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        Coverage {
            universe: self.universe,
            covers: self.covers.clone(),
            weights: None,
        }
        .validate()?;
        let n = self.covers.len();
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(bad("lambda must be finite and >= 0"));
        }
        let mut seen = std::collections::HashSet::new();
        for (k, &(i, j, w)) in self.intf.iter().enumerate() {
            if i >= n || j >= n {
                return Err(bad(format!("interference pair ({i},{j}) outside 0..{n}")));
            }
            if i == j {
                return Err(bad(format!("interference diagonal entry at {i}")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(bad(format!("duplicate interference pair ({i},{j})")));
            }
            check_weight("intensity", k, w)?;
        }
        Ok(())
    }

    /// Intensity between `i` and `j` (zero when absent).
    pub fn intensity(&self, i: usize, j: usize) -> f64 {
        let key = (i.min(j), i.max(j));
        self.intf
            .iter()
            .find(|&&(a, b, _)| (a, b) == key)
            .map_or(0.0, |&(_, _, w)| w)
    }
}

impl SetFunction for InterferenceCoverage {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn value(&self, set: &[usize]) -> f64 {
        let mut hit = vec![false; self.universe];
        for &e in set {
            for &i in &self.covers[e] {
                hit[i] = true;
            }
        }
        let covered = hit.iter().filter(|&&h| h).count() as f64;
        let m = Members::new(self.covers.len(), set);
        let penalty: f64 = self
            .intf
            .iter()
            .filter(|&&(i, j, _)| m.contains(i) && m.contains(j))
            .map(|&(_, _, w)| w)
            .sum();
        covered - self.lambda * penalty
    }
}

/// An arbitrary set function stored as a full table indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct TableObjective {
    n: usize,
    values: Vec<f64>,
    integral: bool,
}

impl TableObjective {
    pub const MAX_N: usize = 24;

    pub fn from_fn(n: usize, f: impl Fn(&[usize]) -> f64) -> Result<Self> {
        if n == 0 || n > Self::MAX_N {
            return Err(Error::param(format!(
                "table objective needs 1 <= n <= {}",
                Self::MAX_N
            )));
        }
        let mut set = Vec::with_capacity(n);
        let values: Vec<f64> = (0..1usize << n)
            .map(|mask| {
                set.clear();
                set.extend((0..n).filter(|&i| (mask >> i) & 1 == 1));
                f(&set)
            })
            .collect();
        let integral = values.iter().all(|v| v.fract() == 0.0);
        Ok(TableObjective {
            n,
            values,
            integral,
        })
    }

    /// Tabulates another set function.
    pub fn tabulate<F: SetFunction + ?Sized>(f: &F) -> Result<Self> {
        let mut t = TableObjective::from_fn(f.ground_size(), |s| f.value(s))?;
        t.integral = f.is_integral();
        Ok(t)
    }

    #[inline]
    pub fn by_mask(&self, mask: usize) -> f64 {
        self.values[mask]
    }
}

impl SetFunction for TableObjective {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[usize]) -> f64 {
        self.values[set.iter().fold(0usize, |m, &e| m | (1 << e))]
    }

    fn is_integral(&self) -> bool {
        self.integral
    }
}
