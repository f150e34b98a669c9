//! Special functions: dilogarithm, log-factorials.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

const PI2_6: f64 = PI * PI / 6.0;

/// Real dilogarithm Li₂(x) for x ∈ [-1, 1].
pub fn dilog(x: f64) -> f64 {
    debug_assert!(
        (-1.0..=1.0).contains(&x),
        "dilog argument {x} outside [-1, 1]"
    );
    if x == 0.0 {
        0.0
    } else if x == 1.0 {
        PI2_6
    } else if x < 0.0 {
        // Li₂(x) + Li₂(-x) = Li₂(x²) / 2
        0.5 * dilog(x * x) - dilog(-x)
    } else if x <= 0.5 {
        dilog_series(x)
    } else {
        // Euler reflection
        PI2_6 - x.ln() * (-x).ln_1p() - dilog_series(1.0 - x)
    }
}

fn dilog_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = x;
    for k in 1..200 {
        let kf = k as f64;
        let term = power / (kf * kf);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        power *= x;
    }
    sum
}

/// Table of ln(n!) for n = 0..len.
#[derive(Debug, Clone)]
pub struct LogFactorials {
    values: Vec<f64>,
}

impl LogFactorials {
    pub fn new(len: usize) -> Self {
        let values = (0..len)
            .map(|n| if n < 2 { 0.0 } else { ln_gamma(n as f64 + 1.0) })
            .collect();
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }
}
