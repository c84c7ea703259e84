use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Linear-interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCi {
    pub lo: f64,
    pub hi: f64,
    pub mean: f64,
}

/// Percentile 95% interval of the mean of paired differences.
pub fn paired_bootstrap(diffs: &[f64], resamples: usize, seed: u64) -> Result<BootstrapCi> {
    if diffs.is_empty() {
        return Err(Error::param("bootstrap needs at least one difference"));
    }
    if resamples == 0 {
        return Err(Error::param("bootstrap needs at least one resample"));
    }
    let n = diffs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| diffs[rng.gen_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    Ok(BootstrapCi {
        lo: quantile(&means, 0.025),
        hi: quantile(&means, 0.975),
        mean: diffs.iter().sum::<f64>() / n as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_diffs_collapse() {
        let ci = paired_bootstrap(&[0.092; 20], 1000, 42).unwrap();
        assert!((ci.lo - 0.092).abs() < 1e-12 && (ci.hi - 0.092).abs() < 1e-12);
    }

    #[test]
    fn balanced_diffs_straddle_zero() {
        let ci = paired_bootstrap(&[1.0, -1.0], 2000, 7).unwrap();
        assert!(ci.lo < 0.0 && ci.hi > 0.0);
        assert_eq!(ci.mean, 0.0);
    }

    #[test]
    fn width_tracks_standard_error() {
        // 50 diffs with mean 0.092 and sample sd 0.23 exactly
        let raw: Vec<f64> = (0..50).map(|i| ((i * 37 % 50) as f64 - 24.5) / 14.43).collect();
        let (m, s) = mean_std(&raw);
        let diffs: Vec<f64> = raw.iter().map(|x| 0.092 + (x - m) / s * 0.23).collect();
        let ci = paired_bootstrap(&diffs, 10_000, 42).unwrap();
        let expected = 2.0 * 1.96 * 0.23 / 50f64.sqrt();
        assert!(((ci.hi - ci.lo) - expected).abs() < 0.15 * expected, "{ci:?}");
        assert!(ci.lo < 0.092 && ci.hi > 0.092);
    }

    #[test]
    fn rejects_empty() {
        assert!(paired_bootstrap(&[], 10, 0).is_err());
        assert!(paired_bootstrap(&[1.0], 0, 0).is_err());
    }

    #[test]
    fn mean_std_basics() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-12);
    }
}
