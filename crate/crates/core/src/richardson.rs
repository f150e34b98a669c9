//! Richardson-extrapolated central differences.

use rayon::prelude::*;

use crate::error::Result;

/// First and second derivatives of `f` at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// Central differences at steps `h` and `h/2`, combined as `(4D(h/2) − D(h))/3`.
///
/// The five evaluations run concurrently.
pub fn derivatives<F>(f: F, x: f64, h: f64) -> Result<Derivatives>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let offsets = [-h, -0.5 * h, 0.0, 0.5 * h, h];
    let v: Vec<f64> = offsets
        .par_iter()
        .map(|&d| f(x + d))
        .collect::<Result<_>>()?;
    let d1 = |fm: f64, fp: f64, s: f64| (fp - fm) / (2.0 * s);
    let d2 = |fm: f64, f0: f64, fp: f64, s: f64| (fp - 2.0 * f0 + fm) / (s * s);
    let first = (4.0 * d1(v[1], v[3], 0.5 * h) - d1(v[0], v[4], h)) / 3.0;
    let second = (4.0 * d2(v[1], v[2], v[3], 0.5 * h) - d2(v[0], v[2], v[4], h)) / 3.0;
    Ok(Derivatives {
        value: v[2],
        first,
        second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let d = derivatives(|x: f64| Ok(x.exp()), 1.0, 1e-3).unwrap();
        let e = 1f64.exp();
        assert!((d.first / e - 1.0).abs() < 1e-12);
        assert!((d.second / e - 1.0).abs() < 1e-8);
        assert_eq!(d.value, e);
    }

    #[test]
    fn quartic_error_order() {
        // Richardson removes h²; the residual scales as h⁴
        let f = |x: f64| Ok(x.powi(-3));
        let exact = -3.0;
        let e1 = (derivatives(f, 1.0, 0.1).unwrap().first - exact).abs();
        let e2 = (derivatives(f, 1.0, 0.05).unwrap().first - exact).abs();
        assert!(e1 / e2 > 12.0 && e1 / e2 < 20.0);
    }
}
