//! Static TE response of a plasma sphere.
//!
//! `r_l = l/(l+1) · I_{l+3/2}(w)/I_{l−1/2}(w)` with `w = ω_p R/c`, built from
//! ratios `ρ_ν = I_{ν+1}/I_ν` that are never formed from the Bessel values.

use crate::error::{CasimirError, Result};

/// `I_{ν+1}(w)/I_ν(w)` by the continued fraction `1/(2(ν+1)/w + 1/(2(ν+2)/w + …))`.
fn ratio_continued_fraction(nu: f64, w: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let max_iter = (10.0 * w) as usize + 10_000;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for j in 1..=max_iter {
        let b = 2.0 * (nu + j as f64) / w;
        d += b;
        if d == 0.0 {
            d = TINY;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-15 {
            return Ok(f);
        }
    }
    Err(CasimirError::Internal(format!(
        "Bessel ratio continued fraction did not converge (ν = {nu}, w = {w})"
    )))
}

/// `I_{ν+1}(w)/I_ν(w)` from the power series, accurate for small `w`.
pub(crate) fn ratio_series(nu: f64, w: f64) -> f64 {
    let s = |nu: f64| {
        let z = 0.25 * w * w;
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..500 {
            term *= z / (k as f64 * (nu + k as f64));
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum
    };
    0.5 * w / (nu + 1.0) * s(nu + 1.0) / s(nu)
}

/// `r_l` for `l = 0..=l_max`. `w = None` is the perfect-conductor limit `l/(l+1)`.
pub fn mie_ratios(l_max: usize, w: Option<f64>) -> Result<Vec<f64>> {
    let Some(w) = w else {
        return Ok((0..=l_max).map(|l| l as f64 / (l as f64 + 1.0)).collect());
    };
    if !(w > 0.0) {
        return Err(CasimirError::InvalidArgument(format!(
            "w = ω_p R/c must be positive (got {w})"
        )));
    }
    // rho[k + 1] = ρ_{k+1/2} for k = −1..=l_max
    let mut rho = vec![0.0; l_max + 2];
    if w < 1e-3 {
        for (i, r) in rho.iter_mut().enumerate() {
            *r = ratio_series(i as f64 - 0.5, w);
        }
    } else {
        let top = l_max as f64 + 0.5;
        rho[l_max + 1] = ratio_continued_fraction(top, w)?;
        for i in (0..=l_max).rev() {
            // ρ_{ν−1} = 1/(2ν/w + ρ_ν) with ν = i + 1/2
            let nu = i as f64 + 0.5;
            rho[i] = 1.0 / (2.0 * nu / w + rho[i + 1]);
        }
    }
    Ok((0..=l_max)
        .map(|l| l as f64 / (l as f64 + 1.0) * rho[l] * rho[l + 1])
        .collect())
}

/// Single `r_l`.
pub fn mie_ratio(l: usize, w: f64) -> Result<f64> {
    Ok(mie_ratios(l, Some(w))?[l])
}
