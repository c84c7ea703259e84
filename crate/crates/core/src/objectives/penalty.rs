use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TOL: f64 = 1e-9;

/// Size penalty `theta(s)` for `s = 0..=n`: zero at the empty set,
/// non-decreasing and convex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PenaltyCurve {
    theta: Vec<f64>,
}

impl PenaltyCurve {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidPenalty("empty penalty table".into()));
        }
        if let Some(bad) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidPenalty(format!("theta[{bad}] is not finite")));
        }
        if theta[0].abs() > TOL {
            return Err(Error::InvalidPenalty(format!(
                "theta[0] must be 0, got {}",
                theta[0]
            )));
        }
        let mut prev_step = f64::NEG_INFINITY;
        for s in 1..theta.len() {
            let step = theta[s] - theta[s - 1];
            if step < -TOL {
                return Err(Error::InvalidPenalty(format!(
                    "decreasing at size {s}: {} < {}",
                    theta[s],
                    theta[s - 1]
                )));
            }
            if step < prev_step - TOL {
                return Err(Error::InvalidPenalty(format!(
                    "not convex at size {s}: step {step} < previous step {prev_step}"
                )));
            }
            prev_step = step;
        }
        Ok(PenaltyCurve { theta })
    }

    /// The all-zero curve for ground sets of size `n`.
    pub fn zero(n: usize) -> Self {
        PenaltyCurve {
            theta: vec![0.0; n + 1],
        }
    }

    /// `theta(s) = slope * s`.
    pub fn linear(n: usize, slope: f64) -> Result<Self> {
        PenaltyCurve::new((0..=n).map(|s| slope * s as f64).collect())
    }

    #[inline]
    pub fn at(&self, size: usize) -> f64 {
        self.theta[size]
    }

    /// Largest size the table covers.
    pub fn max_size(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.theta
    }
}

impl TryFrom<Vec<f64>> for PenaltyCurve {
    type Error = Error;
    fn try_from(theta: Vec<f64>) -> Result<Self> {
        PenaltyCurve::new(theta)
    }
}

impl From<PenaltyCurve> for Vec<f64> {
    fn from(p: PenaltyCurve) -> Self {
        p.theta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_convex_nondecreasing() {
        let p = PenaltyCurve::new(vec![0.0, 0.0, 1.0, 3.0, 6.0]).unwrap();
        assert_eq!(p.at(3), 3.0);
        assert_eq!(p.max_size(), 4);
        assert!(PenaltyCurve::linear(5, 0.5).is_ok());
        assert_eq!(PenaltyCurve::zero(3).values(), &[0.0; 4]);
    }

    #[test]
    fn rejects_invalid_tables() {
        assert!(PenaltyCurve::new(vec![]).is_err());
        assert!(PenaltyCurve::new(vec![1.0, 2.0]).is_err());
        assert!(PenaltyCurve::new(vec![0.0, 2.0, 1.0]).is_err());
        // concave
        assert!(PenaltyCurve::new(vec![0.0, 2.0, 3.0]).is_err());
        assert!(PenaltyCurve::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn serde_validates() {
        let ok: PenaltyCurve = serde_json::from_str("[0.0, 1.0, 2.5]").unwrap();
        assert_eq!(ok.values(), &[0.0, 1.0, 2.5]);
        assert!(serde_json::from_str::<PenaltyCurve>("[0.0, 2.0, 2.5]").is_err());
    }
}
