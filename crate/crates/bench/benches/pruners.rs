use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use prunekit_bench::{cut, facility_location, interference};
use prunekit_core::exact::opt_cardinality;
use prunekit_core::prune::{prune_fast_budget_range, prune_seq_disjoint, prune_window, WindowPick};
use prunekit_core::select::greedy;
use prunekit_core::Oracle;

fn pruners(c: &mut Criterion) {
    let mut group = c.benchmark_group("prune_cut");
    for n in [100usize, 400] {
        let f = cut(n, 7);
        let all: Vec<usize> = (0..n).collect();
        group.bench_with_input(BenchmarkId::new("greedy", n), &n, |b, _| {
            b.iter(|| greedy(&f, &all, 5))
        });
        group.bench_with_input(BenchmarkId::new("seq_disjoint", n), &n, |b, _| {
            b.iter(|| prune_seq_disjoint(&Oracle::unmemoized(&f), 5, 3).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("window_max", n), &n, |b, _| {
            b.iter(|| prune_window(&Oracle::unmemoized(&f), 5, 2, WindowPick::Argmax, 0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fast_budget_range", n), &n, |b, _| {
            b.iter(|| prune_fast_budget_range(&Oracle::unmemoized(&f), 5, 0.2).unwrap())
        });
    }
    group.finish();

    let fl = facility_location(100, 200, 3);
    c.bench_function("seq_disjoint_facility_location_200", |b| {
        b.iter(|| prune_seq_disjoint(&Oracle::unmemoized(&fl), 8, 4).unwrap())
    });
}

fn exact(c: &mut Criterion) {
    let f = interference(20, 5);
    let all: Vec<usize> = (0..20).collect();
    let pruned = prune_seq_disjoint(&Oracle::new(&f), 3, 2).unwrap();
    let mut group = c.benchmark_group("exact_interference_20_k3");
    group.bench_function("full", |b| b.iter(|| opt_cardinality(&f, &all, 3).unwrap()));
    group.bench_function("pruned", |b| {
        b.iter(|| opt_cardinality(&f, &pruned.elements, 3).unwrap())
    });
    group.finish();
}

criterion_group!(benches, pruners, exact);
criterion_main!(benches);
