//! Benchmark fixtures: seeded instances shared by the criterion benches.

use prunekit_core::instances::{gen_gnm, gen_interference, gen_similarity};
use prunekit_core::objectives::{Cut, FacilityLocation, InterferenceCoverage};

/// `G(n, 10n)` cut objective.
pub fn cut(n: usize, seed: u64) -> Cut {
    gen_gnm(n, 10 * n, seed)
        .and_then(|g| g.into_cut())
        .expect("valid gnm parameters")
}

/// Facility location over `rows` uniform-similarity points.
pub fn facility_location(rows: usize, n: usize, seed: u64) -> FacilityLocation {
    gen_similarity(rows, n, seed)
        .and_then(FacilityLocation::new)
        .expect("valid similarity parameters")
}

pub fn interference(n: usize, seed: u64) -> InterferenceCoverage {
    gen_interference(n, prunekit_core::instances::DEFAULT_INTERFERENCE_UNIVERSE, seed)
        .expect("valid interference parameters")
}
