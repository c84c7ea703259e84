use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::SetFunction;

/// Query accounting for a wrapped oracle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleStats {
    /// Evaluations of sets not previously seen.
    pub queries: u64,
    /// Evaluations served from the memo.
    pub cache_hits: u64,
}

impl OracleStats {
    /// Counts accumulated since `earlier`.
    pub fn since(self, earlier: OracleStats) -> OracleStats {
        OracleStats {
            queries: self.queries - earlier.queries,
            cache_hits: self.cache_hits - earlier.cache_hits,
        }
    }
}

/// Counting, memoizing wrapper around a set function.
///
/// Memo keys are canonical sorted element lists. Concurrent evaluations
/// always return the correct value; a set evaluated by two threads at once
/// is counted as one query and one hit.
pub struct Oracle<F> {
    inner: F,
    memo: Option<Mutex<HashMap<Vec<usize>, f64>>>,
    queries: AtomicU64,
    cache_hits: AtomicU64,
}

impl<F: SetFunction> Oracle<F> {
    pub fn new(inner: F) -> Self {
        Oracle {
            inner,
            memo: Some(Mutex::new(HashMap::new())),
            queries: AtomicU64::new(0),
            cache_hits: AtomicU64::new(0),
        }
    }

    /// Counting without memoization: every evaluation is a query.
    pub fn unmemoized(inner: F) -> Self {
        Oracle {
            memo: None,
            ..Oracle::new(inner)
        }
    }

    pub fn stats(&self) -> OracleStats {
        OracleStats {
            queries: self.queries.load(Ordering::Relaxed),
            cache_hits: self.cache_hits.load(Ordering::Relaxed),
        }
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    pub fn into_inner(self) -> F {
        self.inner
    }

    /// `f(S + e) - f(S)` without validation.
    pub fn gain(&self, e: usize, set: &[usize]) -> f64 {
        let mut with = Vec::with_capacity(set.len() + 1);
        with.extend_from_slice(set);
        with.push(e);
        self.value(&with) - self.value(set)
    }

    fn lookup(&self, set: &[usize]) -> f64 {
        let Some(memo) = &self.memo else {
            self.queries.fetch_add(1, Ordering::Relaxed);
            return self.inner.value(set);
        };
        let mut key = set.to_vec();
        key.sort_unstable();
        if let Some(&v) = memo.lock().unwrap().get(&key) {
            self.cache_hits.fetch_add(1, Ordering::Relaxed);
            return v;
        }
        let v = self.inner.value(&key);
        let mut guard = memo.lock().unwrap();
        if guard.insert(key, v).is_none() {
            self.queries.fetch_add(1, Ordering::Relaxed);
        } else {
            self.cache_hits.fetch_add(1, Ordering::Relaxed);
        }
        v
    }
}

impl<F: SetFunction> SetFunction for Oracle<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, set: &[usize]) -> f64 {
        self.lookup(set)
    }

    fn is_integral(&self) -> bool {
        self.inner.is_integral()
    }
}
