//! Property tests for pruner and objective invariants.

use prunekit_core::exact::{opt_cardinality, DEFAULT_GUARD};
use prunekit_core::harness::{containment_report, ReferenceMode};
use prunekit_core::instances::{fit_penalty, gen_gnm, gen_interference};
use prunekit_core::knapsack::{prune_sdg_density, KnapsackInstance};
use prunekit_core::objectives::{Coverage, Cut, Oracle, SetFunction};
use prunekit_core::prune::{
    budget_grid, prune_fast_budget_range, prune_seq_disjoint, prune_std_greedy, prune_window,
    witness, PrunedSet, Structure, WindowPick,
};
use proptest::prelude::*;

fn cut_strategy() -> impl Strategy<Value = Cut> {
    (4usize..=12, any::<u64>()).prop_flat_map(|(n, seed)| {
        (Just(n), 0..=n * (n - 1) / 2, Just(seed))
            .prop_map(|(n, m, seed)| gen_gnm(n, m, seed).unwrap().into_cut().unwrap())
    })
}

fn coverage_strategy() -> impl Strategy<Value = Coverage> {
    (3usize..=12, 4usize..=20).prop_flat_map(|(n, universe)| {
        proptest::collection::vec(proptest::collection::btree_set(0..universe, 0..=5), n).prop_map(move |sets| {
            Coverage::new(universe, sets.into_iter().map(|s| s.into_iter().collect()).collect(), None).unwrap()
        })
    })
}

/// Naive `max_{|T| <= k} f(T)` over bitmasks, independent of the exact module.
fn brute_opt<F: SetFunction>(f: &F, k: usize) -> f64 {
    let n = f.ground_size();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| {
            let set: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            f.value(&set)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_profile_matches_bitmask_enumeration(f in cut_strategy(), k in 0usize..=4) {
        let n = f.ground_size();
        let profile = opt_cardinality(&f, &(0..n).collect::<Vec<_>>(), k).unwrap();
        for kp in 0..=k {
            prop_assert_eq!(profile.opt(kp), brute_opt(&f, kp));
            prop_assert_eq!(f.value(&profile.argmax[kp]), profile.opt(kp));
            prop_assert!(profile.argmax[kp].len() <= kp);
        }
        prop_assert!(profile.opt_by_budget.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn disjoint_runs_are_disjoint_and_full(f in cut_strategy(), k in 1usize..=4, ell in 1usize..=4) {
        let n = f.ground_size();
        let oracle = Oracle::new(&f);
        let p = prune_seq_disjoint(&oracle, k, ell).unwrap();
        prop_assert!(p.len() <= ell * k);
        match &p.structure {
            Structure::DisjointRuns { runs } => {
                prop_assert!(n >= ell * k);
                prop_assert_eq!(runs.len(), ell);
                let mut seen = std::collections::HashSet::new();
                for r in runs {
                    prop_assert_eq!(r.picks.len(), k);
                    for &e in &r.picks {
                        prop_assert!(seen.insert(e));
                    }
                }
                prop_assert_eq!(seen.len(), p.len());
            }
            Structure::Flat => prop_assert_eq!(p.len(), n),
            other => prop_assert!(false, "unexpected structure {:?}", other),
        }
    }

    #[test]
    fn window_size_and_structure(f in cut_strategy(), k in 1usize..=4, omega in 1usize..=3, seed in any::<u64>()) {
        let oracle = Oracle::new(&f);
        let p = prune_window(&oracle, k, omega, WindowPick::Random, seed).unwrap();
        prop_assert!(p.len() <= k + omega * k * k);
        let Structure::Window { committed, windows } = &p.structure else {
            return Err(TestCaseError::fail("expected window structure"));
        };
        prop_assert!(p.contains_all(committed));
        for (t, w) in windows.iter().enumerate() {
            prop_assert!(w.contains(&committed[t]));
            prop_assert!(p.contains_all(w));
            prop_assert!(w.len() <= omega * k);
        }
    }

    #[test]
    fn exact_alpha_in_unit_interval_and_survives_serialization(f in cut_strategy(), k in 1usize..=3, seed in any::<u64>()) {
        let oracle = Oracle::new(&f);
        let pruned = prune_window(&oracle, k, 1, WindowPick::Random, seed).unwrap();
        let report = containment_report(&f, &pruned, k, ReferenceMode::Exact, DEFAULT_GUARD).unwrap();
        prop_assert!(report.alpha_by_budget.iter().all(|&a| (0.0..=1.0).contains(&a)));
        let text = serde_json::to_string(&pruned).unwrap();
        let back: PrunedSet = serde_json::from_str(&text).unwrap();
        let again = containment_report(&f, &back, k, ReferenceMode::Exact, DEFAULT_GUARD).unwrap();
        prop_assert_eq!(report.alpha_by_budget, again.alpha_by_budget);
    }

    #[test]
    fn greedy_prefix_containment_for_monotone(f in coverage_strategy(), k in 1usize..=4) {
        let oracle = Oracle::new(&f);
        let p = prune_std_greedy(&oracle, k).unwrap();
        let r = containment_report(&f, &p, k, ReferenceMode::Exact, DEFAULT_GUARD).unwrap();
        let bound = 1.0 - 1.0 / std::f64::consts::E;
        prop_assert!(r.alpha_by_budget.iter().all(|&a| a >= bound - 1e-9), "{:?}", r.alpha_by_budget);
    }

    #[test]
    fn threshold_grid_runs_fit_budgets(f in coverage_strategy(), k in 1usize..=6, eps in 0.05f64..0.45) {
        let oracle = Oracle::new(&f);
        let p = prune_fast_budget_range(&oracle, k, eps).unwrap();
        let Structure::ThresholdGrid { grid, runs, .. } = &p.structure else {
            return Err(TestCaseError::fail("expected grid"));
        };
        prop_assert_eq!(grid, &budget_grid(k, eps / 4.0));
        prop_assert_eq!(grid.first().copied(), Some(1));
        prop_assert_eq!(grid.last().copied(), Some(k));
        for (q, run) in grid.iter().zip(runs) {
            prop_assert!(run.len() <= *q);
        }
        for kp in 0..=k {
            let w = witness(&p, &oracle, kp, 3).unwrap();
            prop_assert!(w.len() <= kp && p.contains_all(&w));
        }
    }

    #[test]
    fn knapsack_cost_caps(seed in any::<u64>(), n in 4usize..=16, ell in 1usize..=4, budget in 0.5f64..4.0) {
        let f = gen_interference(n, 20, seed).unwrap();
        let costs: Vec<f64> = (0..n).map(|i| budget * (0.05 + ((seed >> (i % 48)) & 7) as f64 / 8.0)).collect();
        let inst = KnapsackInstance::new(costs, budget).unwrap();
        let p = prune_sdg_density(&Oracle::new(&f), &inst, ell).unwrap();
        prop_assert!(p.total_cost <= 3.0 * ell as f64 * budget * (1.0 + 1e-12));
        for r in &p.runs {
            prop_assert!(r.accepted_cost <= 3.0 * budget * (1.0 + 1e-12));
            prop_assert!(r.accepted_cost + r.dummy_cost >= 2.0 * budget * (1.0 - 1e-12));
        }
    }

    #[test]
    fn fitted_penalty_is_a_valid_curve(
        n in 1usize..=20,
        pts in proptest::collection::vec((0usize..=20, -5.0f64..5.0), 1..40),
    ) {
        let pts: Vec<(usize, f64)> = pts.into_iter().map(|(s, q)| (s % (n + 1), q)).collect();
        let curve = fit_penalty(&pts, n).unwrap();
        let t = curve.values();
        prop_assert_eq!(t.len(), n + 1);
        prop_assert_eq!(t[0], 0.0);
        for s in 1..=n {
            prop_assert!(t[s] >= t[s - 1] - 1e-9);
        }
        for s in 2..=n {
            prop_assert!(t[s] - t[s - 1] >= t[s - 1] - t[s - 2] - 1e-9);
        }
    }

    #[test]
    fn memoized_oracle_is_transparent(f in cut_strategy(), sets in proptest::collection::vec(proptest::collection::btree_set(0usize..4, 0..4), 1..20)) {
        let oracle = Oracle::new(&f);
        for s in &sets {
            let v: Vec<usize> = s.iter().copied().collect();
            prop_assert_eq!(oracle.value(&v), f.value(&v));
        }
        let distinct: std::collections::HashSet<_> = sets.iter().collect();
        prop_assert_eq!(oracle.stats().queries as usize, distinct.len());
    }
}
