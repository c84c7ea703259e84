//! Size-penalty fitting from observed `(size, quality)` pairs.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::objectives::PenaltyCurve;

/// Weighted pool-adjacent-violators fit of a non-increasing sequence.
pub fn pava_nonincreasing(values: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(values.len(), weights.len());
    // blocks of (mean, weight, length)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        blocks.push((v, w, 1));
        while blocks.len() > 1 {
            let (m2, w2, l2) = blocks[blocks.len() - 1];
            let (m1, w1, l1) = blocks[blocks.len() - 2];
            if m1 >= m2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            blocks.push(((m1 * w1 + m2 * w2) / (w1 + w2), w1 + w2, l1 + l2));
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, _, l)| std::iter::repeat_n(m, l))
        .collect()
}

/// Greatest convex minorant of `y` on the grid `0..y.len()`.
fn convex_minorant(y: &[f64]) -> Vec<f64> {
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..y.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b when it lies on or above the chord a -> i
            let cross = (y[b] - y[a]) * (i - a) as f64 - (y[i] - y[a]) * (b - a) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out = vec![0.0; y.len()];
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slope = (y[b] - y[a]) / (b - a) as f64;
        for (s, slot) in out.iter_mut().enumerate().take(b + 1).skip(a) {
            *slot = y[a] + slope * (s - a) as f64;
        }
    }
    if let Some(&only) = hull.first() {
        out[only] = y[only];
    }
    out
}

/// Convex, non-decreasing size penalty for ground sets of size `n`.
///
/// Mean quality is taken per observed size and fitted non-increasing by
/// PAVA. Up to the last size reaching the fitted maximum the penalty is 0;
/// after it the penalty is the fitted quality drop. Gaps between observed
/// sizes are interpolated linearly and sizes past the last observation
/// continue its final slope. The result is the greatest convex minorant of
/// that table.
pub fn fit_penalty(points: &[(usize, f64)], n: usize) -> Result<PenaltyCurve> {
    if points.is_empty() {
        return Err(Error::InvalidPenalty("no observations to fit".into()));
    }
    let mut by_size: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for &(s, q) in points {
        if s > n {
            return Err(Error::InvalidPenalty(format!("size {s} exceeds n = {n}")));
        }
        if !q.is_finite() {
            return Err(Error::InvalidPenalty(format!("quality at size {s} is not finite")));
        }
        let slot = by_size.entry(s).or_insert((0.0, 0));
        slot.0 += q;
        slot.1 += 1;
    }
    let sizes: Vec<usize> = by_size.keys().copied().collect();
    let means: Vec<f64> = by_size.values().map(|&(t, c)| t / c as f64).collect();
    let weights: Vec<f64> = by_size.values().map(|&(_, c)| c as f64).collect();
    let fitted = pava_nonincreasing(&means, &weights);
    let top = fitted[0];
    let peak = fitted.iter().rposition(|&q| q >= top).expect("non-empty fit");
    let drop: Vec<f64> = fitted
        .iter()
        .enumerate()
        .map(|(i, &q)| if i <= peak { 0.0 } else { (top - q).max(0.0) })
        .collect();

    let mut table = vec![0.0; n + 1];
    for (s, slot) in table.iter_mut().enumerate() {
        *slot = match sizes.binary_search(&s) {
            Ok(i) => drop[i],
            Err(0) => 0.0,
            Err(i) if i < sizes.len() => {
                let (s0, s1) = (sizes[i - 1], sizes[i]);
                let t = (s - s0) as f64 / (s1 - s0) as f64;
                drop[i - 1] + t * (drop[i] - drop[i - 1])
            }
            Err(_) => {
                let last = sizes.len() - 1;
                let slope = if last == 0 {
                    0.0
                } else {
                    (drop[last] - drop[last - 1]) / (sizes[last] - sizes[last - 1]) as f64
                };
                drop[last] + slope * (s - sizes[last]) as f64
            }
        };
    }
    let mut theta = convex_minorant(&table);
    theta[0] = 0.0;
    for s in 1..theta.len() {
        theta[s] = theta[s].max(theta[s - 1]);
    }
    PenaltyCurve::new(theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pava_pools_violators() {
        assert_eq!(pava_nonincreasing(&[3.0, 2.0, 1.0], &[1.0; 3]), vec![3.0, 2.0, 1.0]);
        assert_eq!(pava_nonincreasing(&[1.0, 3.0], &[1.0; 2]), vec![2.0, 2.0]);
        assert_eq!(pava_nonincreasing(&[1.0, 3.0], &[3.0, 1.0]), vec![1.5, 1.5]);
        let hand = pava_nonincreasing(&[0.5, 0.7, 0.6, 0.4, 0.45], &[1.0; 5]);
        let expect = [0.6, 0.6, 0.6, 0.425, 0.425];
        for (a, b) in hand.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{hand:?}");
        }
    }

    #[test]
    fn minorant_of_convex_is_identity() {
        let y = [0.0, 0.0, 1.0, 3.0, 6.0];
        assert_eq!(convex_minorant(&y), y.to_vec());
        let bumpy = convex_minorant(&[0.0, 2.0, 2.0, 3.0]);
        assert_eq!(bumpy, vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn constant_quality_gives_zero_penalty() {
        let pts: Vec<(usize, f64)> = (0..=6).map(|s| (s, 0.8)).collect();
        assert_eq!(fit_penalty(&pts, 6).unwrap(), PenaltyCurve::zero(6));
    }

    #[test]
    fn linear_decline_gives_linear_penalty() {
        let pts: Vec<(usize, f64)> = (0..=5).map(|s| (s, 1.0 - 0.1 * s as f64)).collect();
        let curve = fit_penalty(&pts, 8).unwrap();
        for s in 0..=8 {
            assert!((curve.at(s) - 0.1 * s as f64).abs() < 1e-9, "{s}");
        }
    }

    #[test]
    fn hump_is_flat_then_convex() {
        // PAVA by hand: 0.5, 0.7, 0.6 pool to 0.6; 0.4, 0.45 pool to 0.425
        let pts = [(1, 0.5), (2, 0.7), (3, 0.6), (4, 0.4), (5, 0.45)];
        let curve = fit_penalty(&pts, 6).unwrap();
        let t = curve.values();
        assert_eq!(&t[..4], &[0.0, 0.0, 0.0, 0.0]);
        // the drop of 0.175 after size 3 is spread by the convex minorant
        for s in 4..=6 {
            assert!((t[s] - 0.175 * (s - 3) as f64 / 3.0).abs() < 1e-9, "{t:?}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_penalty(&[], 3).is_err());
        assert!(fit_penalty(&[(4, 1.0)], 3).is_err());
        assert!(fit_penalty(&[(1, f64::NAN)], 3).is_err());
    }
}
