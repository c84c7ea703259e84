//! Set-function oracles: the value-oracle contract, the built-in objective
//! families, query accounting and randomized structural checks.

mod check;
mod families;
mod oracle;
mod penalty;
mod spec;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use check::{
    check_monotone, check_monotone_exhaustive, check_submodular, check_submodular_exhaustive,
    PropertyReport, Violation,
};
pub use families::{
    Coverage, Cut, FacilityLocation, InterferenceCoverage, Proxy, RestrictedFacilityLocation,
    TableObjective, PROXY_EXACT_LIMIT,
};
pub use oracle::{Oracle, OracleStats};
pub use penalty::PenaltyCurve;
pub use spec::ObjectiveSpec;

/// Comparison tolerance for real-valued objectives.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// A set function `f: 2^N -> R` over the dense ground set `0..n`.
///
/// `value` receives a duplicate-free list of in-range ids in any order.
/// Callers that cannot guarantee this should go through [`eval`].
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, set: &[usize]) -> f64;

    /// Integer-valued objectives compare exactly.
    fn is_integral(&self) -> bool {
        false
    }

    fn tolerance(&self) -> f64 {
        if self.is_integral() {
            0.0
        } else {
            REAL_TOLERANCE
        }
    }
}

impl<T: SetFunction + ?Sized> SetFunction for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[usize]) -> f64 {
        (**self).value(set)
    }
    fn is_integral(&self) -> bool {
        (**self).is_integral()
    }
}

impl<T: SetFunction + ?Sized> SetFunction for Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[usize]) -> f64 {
        (**self).value(set)
    }
    fn is_integral(&self) -> bool {
        (**self).is_integral()
    }
}

impl<T: SetFunction + ?Sized> SetFunction for Arc<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[usize]) -> f64 {
        (**self).value(set)
    }
    fn is_integral(&self) -> bool {
        (**self).is_integral()
    }
}

/// The dense ground set `0..n` with optional display labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("ground set must have at least one element"));
        }
        Ok(GroundSet { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut g = GroundSet::new(labels.len())?;
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn ids(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn label(&self, id: usize) -> String {
        match &self.labels {
            Some(l) if id < l.len() => l[id].clone(),
            _ => id.to_string(),
        }
    }
}

/// Checks that `set` is duplicate-free and inside `0..n`.
pub fn validate_set(n: usize, set: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    for &e in set {
        if e >= n {
            return Err(Error::ElementOutOfRange { element: e, n });
        }
        if std::mem::replace(&mut seen[e], true) {
            return Err(Error::DuplicateElement(e));
        }
    }
    Ok(())
}

/// `f(S)` with input validation.
pub fn eval<F: SetFunction + ?Sized>(f: &F, set: &[usize]) -> Result<f64> {
    validate_set(f.ground_size(), set)?;
    Ok(f.value(set))
}

/// `f(e | S) = f(S + e) - f(S)`; rejects `e` already in `S`.
pub fn marginal<F: SetFunction + ?Sized>(f: &F, e: usize, set: &[usize]) -> Result<f64> {
    let n = f.ground_size();
    validate_set(n, set)?;
    if e >= n {
        return Err(Error::ElementOutOfRange { element: e, n });
    }
    if set.contains(&e) {
        return Err(Error::ElementInSet(e));
    }
    let mut with = set.to_vec();
    with.push(e);
    Ok(f.value(&with) - f.value(set))
}

/// Membership test for one evaluation: a bitmask when `n <= 64`.
pub(crate) enum Members {
    Bits(u64),
    Flags(Vec<bool>),
}

impl Members {
    pub(crate) fn new(n: usize, set: &[usize]) -> Self {
        if n <= 64 {
            Members::Bits(set.iter().fold(0u64, |m, &e| m | (1u64 << e)))
        } else {
            let mut flags = vec![false; n];
            for &e in set {
                flags[e] = true;
            }
            Members::Flags(flags)
        }
    }

    #[inline]
    pub(crate) fn contains(&self, e: usize) -> bool {
        match self {
            Members::Bits(m) => (m >> e) & 1 == 1,
            Members::Flags(f) => f[e],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Cut {
        Cut::new(3, vec![(0, 1), (1, 2), (0, 2)], None).unwrap()
    }

    fn small_coverage() -> Coverage {
        Coverage::new(4, vec![vec![1, 2], vec![2, 3]], None).unwrap()
    }

    #[test]
    fn cut_examples() {
        let f = triangle();
        assert_eq!(eval(&f, &[0]).unwrap(), 2.0);
        assert_eq!(eval(&f, &[0, 1, 2]).unwrap(), 0.0);
        assert_eq!(eval(&f, &[]).unwrap(), 0.0);
        assert_eq!(marginal(&f, 1, &[0]).unwrap(), 0.0);
        assert!(f.is_integral());
    }

    #[test]
    fn coverage_examples() {
        let f = small_coverage();
        assert_eq!(eval(&f, &[0, 1]).unwrap(), 3.0);
        assert_eq!(marginal(&f, 1, &[0]).unwrap(), 1.0);
        assert_eq!(marginal(&f, 0, &[]).unwrap(), eval(&f, &[0]).unwrap());
    }

    #[test]
    fn eval_rejects_bad_sets() {
        let f = triangle();
        assert!(matches!(
            eval(&f, &[3]),
            Err(Error::ElementOutOfRange { element: 3, n: 3 })
        ));
        assert!(matches!(eval(&f, &[1, 1]), Err(Error::DuplicateElement(1))));
        assert!(matches!(marginal(&f, 0, &[0]), Err(Error::ElementInSet(0))));
        assert!(matches!(
            marginal(&f, 5, &[0]),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn ground_set_requires_elements() {
        assert!(GroundSet::new(0).is_err());
        let g = GroundSet::with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(g.n, 2);
        assert_eq!(g.label(1), "b");
        assert_eq!(g.ids().count(), 2);
    }

    #[test]
    fn members_agree_across_representations() {
        let set = [0, 5, 63];
        let small = Members::new(64, &set);
        let large = Members::new(100, &set);
        for e in 0..64 {
            assert_eq!(small.contains(e), large.contains(e));
        }
    }
}
