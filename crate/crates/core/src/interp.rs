//! Monotone piecewise-cubic Hermite interpolation (PCHIP).

use crate::error::{CasimirError, Result};

/// Shape-preserving cubic interpolant through strictly increasing abscissae.
///
/// Slopes follow the Fritsch–Butland weighted harmonic mean, so the
/// interpolant is monotone on every interval where the data are.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(CasimirError::InvalidArgument(
                "interpolation needs at least two points of matching length".into(),
            ));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CasimirError::InvalidArgument(
                "abscissae must be strictly increasing".into(),
            ));
        }
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut slope = vec![0.0; n];
        if n == 2 {
            slope[0] = delta[0];
            slope[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    slope[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            slope[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slope[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { x, y, slope })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Interpolated value; `None` outside the node range.
    pub fn eval(&self, t: f64) -> Option<f64> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return None;
        }
        let i = match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => return Some(self.y[i]),
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        Some(
            h00 * self.y[i]
                + h10 * h * self.slope[i]
                + h01 * self.y[i + 1]
                + h11 * h * self.slope[i + 1],
        )
    }
}

// three-point end condition, clipped to stay shape-preserving
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_nodes_and_rejects_extrapolation() {
        let p = MonotoneCubic::new(vec![0.0, 1.0, 3.0], vec![1.0, 2.0, 0.5]).unwrap();
        assert_eq!(p.eval(1.0), Some(2.0));
        assert_eq!(p.eval(3.0), Some(0.5));
        assert!(p.eval(3.0001).is_none());
        assert!(p.eval(-1e-9).is_none());
    }

    #[test]
    fn linear_data_is_reproduced() {
        let x: Vec<f64> = (0..6).map(|i| i as f64 * 0.7).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 3.0 * v).collect();
        let p = MonotoneCubic::new(x, y).unwrap();
        for k in 0..50 {
            let t = k as f64 * 0.07;
            assert!((p.eval(t).unwrap() - (2.0 - 3.0 * t)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn monotone_data_gives_monotone_interpolant(
            steps in proptest::collection::vec((0.05f64..2.0, 0.0f64..1.0), 3..12),
            probes in proptest::collection::vec(0.0f64..1.0, 2..40),
        ) {
            let mut x = vec![0.0];
            let mut y = vec![0.0];
            for (dx, dy) in &steps {
                x.push(x.last().unwrap() + dx);
                y.push(y.last().unwrap() + dy);
            }
            let span = *x.last().unwrap();
            let p = MonotoneCubic::new(x, y).unwrap();
            let mut ts: Vec<f64> = probes.iter().map(|s| s * span).collect();
            ts.sort_by(f64::total_cmp);
            let vals: Vec<f64> = ts.iter().map(|&t| p.eval(t).unwrap()).collect();
            for w in vals.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12);
            }
        }
    }
}
