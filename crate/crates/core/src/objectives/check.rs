use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{SetFunction, TableObjective};
use crate::error::{Error, Result};

/// One witnessed failure of a structural property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// The added element for submodularity checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    pub amount: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub checked: u64,
    pub violations: Vec<Violation>,
    pub max_violation: f64,
}

impl PropertyReport {
    fn new(property: &str) -> Self {
        PropertyReport {
            property: property.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, v: Violation) {
        self.max_violation = self.max_violation.max(v.amount);
        // keep the report bounded on badly broken objectives
        if self.violations.len() < 1000 {
            self.violations.push(v);
        }
    }
}

/// Uniformly random nested pair `A ⊆ B`: each element independently lands in
/// `A`, in `B \ A`, or outside `B`.
fn nested_pair(n: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let (mut a, mut b, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for e in 0..n {
        match rng.gen_range(0..3) {
            0 => {
                a.push(e);
                b.push(e);
            }
            1 => b.push(e),
            _ => out.push(e),
        }
    }
    (a, b, out)
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::param("trials must be >= 1"));
    }
    Ok(())
}

fn with(set: &[usize], x: usize) -> Vec<usize> {
    let mut s = set.to_vec();
    s.push(x);
    s
}

/// Samples triples `(A ⊆ B, x ∉ B)` and records each with
/// `f(x | A) < f(x | B) - tol`.
pub fn check_submodular<F: SetFunction + ?Sized>(
    f: &F,
    trials: usize,
    seed: u64,
) -> Result<PropertyReport> {
    check_trials(trials)?;
    let n = f.ground_size();
    let tol = f.tolerance();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PropertyReport::new("submodular");
    let mut done = 0;
    while done < trials {
        let (a, b, out) = nested_pair(n, &mut rng);
        let Some(&x) = out.choose(&mut rng) else {
            if n == 0 {
                break;
            }
            continue;
        };
        done += 1;
        let gain_a = f.value(&with(&a, x)) - f.value(&a);
        let gain_b = f.value(&with(&b, x)) - f.value(&b);
        if gain_a < gain_b - tol {
            report.record(Violation {
                a,
                b,
                x: Some(x),
                amount: gain_b - gain_a,
            });
        }
    }
    report.checked = done as u64;
    Ok(report)
}

/// Samples pairs `A ⊆ B` and records each with `f(A) > f(B) + tol`.
pub fn check_monotone<F: SetFunction + ?Sized>(
    f: &F,
    trials: usize,
    seed: u64,
) -> Result<PropertyReport> {
    check_trials(trials)?;
    let n = f.ground_size();
    let tol = f.tolerance();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PropertyReport::new("monotone");
    for _ in 0..trials {
        let (a, b, _) = nested_pair(n, &mut rng);
        let (fa, fb) = (f.value(&a), f.value(&b));
        if fa > fb + tol {
            report.record(Violation {
                a,
                b,
                x: None,
                amount: fa - fb,
            });
        }
    }
    report.checked = trials as u64;
    Ok(report)
}

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| (mask >> i) & 1 == 1).collect()
}

/// Exhaustive submodularity over every `A` and `x, y ∉ A`:
/// `f(x | A) >= f(x | A + y)`, which is equivalent to the nested-pair form.
pub fn check_submodular_exhaustive<F: SetFunction + ?Sized>(f: &F) -> Result<PropertyReport> {
    let table = TableObjective::tabulate(f)?;
    let n = f.ground_size();
    let tol = f.tolerance();
    let mut report = PropertyReport::new("submodular");
    for mask in 0..1usize << n {
        for x in (0..n).filter(|&x| (mask >> x) & 1 == 0) {
            let gain_a = table.by_mask(mask | 1 << x) - table.by_mask(mask);
            for y in (0..n).filter(|&y| y != x && (mask >> y) & 1 == 0) {
                report.checked += 1;
                let b = mask | 1 << y;
                let gain_b = table.by_mask(b | 1 << x) - table.by_mask(b);
                if gain_a < gain_b - tol {
                    report.record(Violation {
                        a: members(mask, n),
                        b: members(b, n),
                        x: Some(x),
                        amount: gain_b - gain_a,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Exhaustive monotonicity over every `A` and `x ∉ A`.
pub fn check_monotone_exhaustive<F: SetFunction + ?Sized>(f: &F) -> Result<PropertyReport> {
    let table = TableObjective::tabulate(f)?;
    let n = f.ground_size();
    let tol = f.tolerance();
    let mut report = PropertyReport::new("monotone");
    for mask in 0..1usize << n {
        for x in (0..n).filter(|&x| (mask >> x) & 1 == 0) {
            report.checked += 1;
            let b = mask | 1 << x;
            let drop = table.by_mask(mask) - table.by_mask(b);
            if drop > tol {
                report.record(Violation {
                    a: members(mask, n),
                    b: members(b, n),
                    x: None,
                    amount: drop,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{Coverage, Cut, FacilityLocation, PenaltyCurve, Proxy};

    #[test]
    fn coverage_passes_sampled_checks() {
        let cov = Coverage::new(
            8,
            vec![vec![0, 1, 2], vec![2, 3], vec![4, 5, 6], vec![6, 7, 0], vec![1, 5]],
            None,
        )
        .unwrap();
        let r = check_submodular(&cov, 1000, 7).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 1000);
        assert!(check_monotone(&cov, 1000, 7).unwrap().passed());
    }

    #[test]
    fn squared_size_is_supermodular() {
        let sq = TableObjective::from_fn(4, |s| (s.len() * s.len()) as f64).unwrap();
        assert!(!check_submodular_exhaustive(&sq).unwrap().passed());
        assert!(!check_submodular(&sq, 200, 1).unwrap().passed());
        // the triple (A = {}, B = {0}, x = 1): gain 1 < gain 3
        let r = check_submodular_exhaustive(&sq).unwrap();
        assert!(r
            .violations
            .iter()
            .any(|v| v.a.is_empty() && v.b == vec![1] && v.x == Some(0)));
    }

    #[test]
    fn triangle_cut_is_not_monotone() {
        let cut = Cut::new(3, vec![(0, 1), (1, 2), (0, 2)], None).unwrap();
        assert!(check_submodular_exhaustive(&cut).unwrap().passed());
        let mono = check_monotone_exhaustive(&cut).unwrap();
        assert!(!mono.passed());
        assert_eq!(mono.max_violation, 2.0);
    }

    #[test]
    fn proxy_with_convex_theta_is_submodular_not_monotone() {
        let fl = FacilityLocation::new(vec![vec![0.0; 5]; 2]).unwrap();
        let p = Proxy::new(
            fl,
            PenaltyCurve::new(vec![0.0, 0.1, 0.3, 0.6, 1.0, 1.5]).unwrap(),
            true,
        )
        .unwrap();
        assert!(check_submodular(&p, 1000, 3).unwrap().passed());
        assert!(!check_monotone(&p, 1000, 3).unwrap().passed());
    }

    #[test]
    fn zero_trials_rejected() {
        let cut = Cut::new(2, vec![(0, 1)], None).unwrap();
        assert!(check_submodular(&cut, 0, 0).is_err());
        assert!(check_monotone(&cut, 0, 0).is_err());
    }
}
