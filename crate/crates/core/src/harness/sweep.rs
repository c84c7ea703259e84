use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::mean_std;
use super::{containment_report_with, ContainmentReport, Reference, ReferenceMode};
use crate::error::{Error, Result};
use crate::instances::GenSpec;
use crate::objectives::{ObjectiveSpec, Oracle};
use crate::prune::Algorithm;

/// Where sweep instances come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceSource {
    /// A fresh instance per seed, generated with seed `spec.seed + seed`.
    Generate(GenSpec),
    /// The same objective for every seed.
    Fixed(Box<ObjectiveSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub instance: InstanceSource,
    pub algorithms: Vec<Algorithm>,
    pub omegas: Vec<usize>,
    pub seeds: Vec<u64>,
    pub k: usize,
    pub epsilon: f64,
    pub reference: ReferenceMode,
    pub guard: u64,
    /// Worker threads; 1 runs everything on the calling thread.
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub omega: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ContainmentReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Aggregate over the seeds of one `(algorithm, omega)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub algorithm: Algorithm,
    pub omega: usize,
    pub rows: usize,
    pub errors: usize,
    pub mean_alpha: f64,
    pub std_alpha: f64,
    pub mean_min_alpha: f64,
    pub mean_size: f64,
    pub mean_queries: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub cells: Vec<SweepCell>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() || self.omegas.is_empty() || self.seeds.is_empty() {
            return Err(Error::param("sweep needs at least one algorithm, omega and seed"));
        }
        if self.omegas.contains(&0) {
            return Err(Error::param("omega must be >= 1"));
        }
        if self.jobs == 0 {
            return Err(Error::param("jobs must be >= 1"));
        }
        Ok(())
    }
}

fn run_seed(config: &SweepConfig, seed: u64) -> Vec<SweepRow> {
    let (instance_seed, built) = match &config.instance {
        InstanceSource::Generate(spec) => {
            let s = spec.seed.wrapping_add(seed);
            (Some(s), spec.with_seed(s).build())
        }
        InstanceSource::Fixed(f) => (None, Ok((**f).clone())),
    };
    let cells = config
        .algorithms
        .iter()
        .flat_map(|&a| config.omegas.iter().map(move |&w| (a, w)));
    let guard = config.guard as u128;
    let setup = built.and_then(|f| {
        let reference = Reference::compute(&f, config.k, config.reference, guard)?;
        Ok((f, reference))
    });
    cells
        .map(|(algorithm, omega)| {
            let outcome = setup.as_ref().map_err(|e| e.to_string()).and_then(|(f, reference)| {
                let oracle = Oracle::new(f);
                let pruned = algorithm
                    .run(&oracle, config.k, omega, config.epsilon, seed)
                    .map_err(|e| e.to_string())?;
                containment_report_with(f, &pruned, config.k, reference, guard).map_err(|e| e.to_string())
            });
            let (report, error) = match outcome {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e)),
            };
            SweepRow {
                algorithm,
                omega,
                seed,
                instance_seed,
                report,
                error,
            }
        })
        .collect()
}

fn aggregate(rows: &[SweepRow]) -> Vec<SweepCell> {
    let mut groups: BTreeMap<(Algorithm, usize), Vec<&SweepRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.algorithm, r.omega)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((algorithm, omega), group)| {
            let ok: Vec<&ContainmentReport> = group.iter().filter_map(|r| r.report.as_ref()).collect();
            let alphas: Vec<f64> = ok.iter().map(|r| r.alpha()).collect();
            let (mean_alpha, std_alpha) = mean_std(&alphas);
            let avg = |xs: Vec<f64>| mean_std(&xs).0;
            SweepCell {
                algorithm,
                omega,
                rows: group.len(),
                errors: group.len() - ok.len(),
                mean_alpha,
                std_alpha,
                mean_min_alpha: avg(ok.iter().map(|r| r.min_alpha()).collect()),
                mean_size: avg(ok.iter().map(|r| r.pruned_size as f64).collect()),
                mean_queries: avg(ok.iter().map(|r| r.prune_stats.queries as f64).collect()),
            }
        })
        .collect()
}

/// Runs every `(algorithm, omega, seed)` cell. Per-cell failures are kept
/// as error rows. Output order is fixed by the cell key, independent of
/// `jobs`.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut rows: Vec<SweepRow> = if config.jobs == 1 {
        config.seeds.iter().flat_map(|&s| run_seed(config, s)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::param(format!("thread pool: {e}")))?;
        pool.install(|| {
            config
                .seeds
                .par_iter()
                .flat_map_iter(|&s| run_seed(config, s))
                .collect()
        })
    };
    rows.sort_by_key(|r| (r.algorithm, r.omega, r.seed));
    let cells = aggregate(&rows);
    Ok(SweepResult { rows, cells })
}

impl SweepResult {
    /// Aggregate table as CSV, one line per cell.
    pub fn cells_csv(&self) -> String {
        let mut out = String::from(
            "algorithm,omega,rows,errors,mean_alpha,std_alpha,mean_min_alpha,mean_size,mean_queries\n",
        );
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{},{},{:.6},{:.6},{:.6},{:.3},{:.1}",
                c.algorithm.name(),
                c.omega,
                c.rows,
                c.errors,
                c.mean_alpha,
                c.std_alpha,
                c.mean_min_alpha,
                c.mean_size,
                c.mean_queries
            )
            .expect("write to string");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::Family;

    fn config(algorithms: Vec<Algorithm>, omegas: Vec<usize>, seeds: Vec<u64>) -> SweepConfig {
        SweepConfig {
            instance: InstanceSource::Generate(GenSpec {
                family: Family::Gnm { n: 12, m: 24 },
                seed: 100,
            }),
            algorithms,
            omegas,
            seeds,
            k: 3,
            epsilon: 0.2,
            reference: ReferenceMode::Exact,
            guard: 1_000_000,
            jobs: 1,
        }
    }

    #[test]
    fn single_cell_single_row() {
        let r = sweep(&config(vec![Algorithm::SeqDisjoint], vec![2], vec![0])).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.cells.len(), 1);
        assert_eq!(r.cells[0].rows, 1);
        assert_eq!(r.rows[0].instance_seed, Some(100));
    }

    #[test]
    fn grid_counts_and_determinism() {
        let c = config(vec![Algorithm::SeqDisjoint, Algorithm::Random], vec![2, 3, 5], vec![0, 1, 2]);
        let a = sweep(&c).unwrap();
        assert_eq!(a.rows.len(), 18);
        assert_eq!(a.cells.len(), 6);
        assert_eq!(a.cells.iter().map(|c| c.rows).sum::<usize>(), a.rows.len());
        let parallel = sweep(&SweepConfig { jobs: 3, ..c }).unwrap();
        let strip = |r: &SweepResult| {
            r.rows
                .iter()
                .map(|row| (row.algorithm, row.omega, row.seed, row.report.as_ref().map(|x| x.alpha_by_budget.clone())))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&parallel));
        assert!(a.cells_csv().lines().count() == 7);
    }

    #[test]
    fn errors_are_recorded_per_cell() {
        let mut c = config(vec![Algorithm::FastBudgetRange, Algorithm::SeqDisjoint], vec![2], vec![0]);
        c.epsilon = 0.9;
        let r = sweep(&c).unwrap();
        let failed: Vec<_> = r.rows.iter().filter(|row| row.error.is_some()).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].algorithm, Algorithm::FastBudgetRange);
        assert!(sweep(&config(vec![], vec![2], vec![0])).is_err());
    }
}
