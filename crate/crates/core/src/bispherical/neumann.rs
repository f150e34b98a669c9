//! Neumann zero mode (TE of a perfect conductor).
//!
//! Each sphere's T-matrix is `T = −S(1 + δT)S` with `S = diag(e^{−(l+½)ν})`,
//! `ν = |μ|`, and `δT` solving the tridiagonal system `B δT = −2 sinh ν`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{CasimirError, Result};
use crate::geometry::{BisphericalGeometry, MuDerivatives, SphereGeometry};
use crate::linalg::{log_det_lu, Tridiagonal};
use crate::richardson::derivatives;
use crate::units::thermal_energy;

use super::{l_max_for, BisphericalOptions, ClassicalResult};

/// T-matrix of one sphere and its first two `ν` derivatives.
struct SideT {
    t: DMatrix<f64>,
    d1: DMatrix<f64>,
    d2: DMatrix<f64>,
}

fn b_matrix(nu: f64, m: usize, l_max: usize) -> Tridiagonal {
    let (s, c) = (nu.sinh(), nu.cosh());
    let ls: Vec<usize> = (m..=l_max).collect();
    Tridiagonal {
        diag: ls.iter().map(|&l| (2 * l + 1) as f64 * c + s).collect(),
        lower: ls[1..].iter().map(|&l| -((l - m) as f64)).collect(),
        upper: ls[..ls.len() - 1]
            .iter()
            .map(|&l| -((l + 1 + m) as f64))
            .collect(),
    }
}

/// Bispherical Neumann T-matrix for azimuthal number `m`, `l ∈ [m, l_max]`.
pub fn neumann_t_matrix(nu: f64, m: usize, l_max: usize) -> Result<DMatrix<f64>> {
    Ok(side(nu, m, l_max, false)?.t)
}

fn side(nu: f64, m: usize, l_max: usize, with_derivatives: bool) -> Result<SideT> {
    let n = l_max + 1 - m;
    let b = b_matrix(nu, m, l_max);
    let binv = b.factor()?.inverse();
    let (s, c) = (nu.sinh(), nu.cosh());
    let dt = &binv * (-2.0 * s);
    let sv: Vec<f64> = (m..=l_max)
        .map(|l| (-(l as f64 + 0.5) * nu).exp())
        .collect();
    let dv: Vec<f64> = (m..=l_max).map(|l| -(l as f64 + 0.5)).collect();
    let sandwich = |x: &DMatrix<f64>| DMatrix::from_fn(n, n, |i, j| -sv[i] * x[(i, j)] * sv[j]);
    let mm = DMatrix::identity(n, n) + &dt;
    let t = sandwich(&mm);
    if !with_derivatives {
        return Ok(SideT {
            t,
            d1: DMatrix::zeros(0, 0),
            d2: DMatrix::zeros(0, 0),
        });
    }
    // B′ = diag((2l+1) sinh ν + cosh ν), B″ = diag(B)
    let b1: Vec<f64> = (m..=l_max).map(|l| (2 * l + 1) as f64 * s + c).collect();
    let row_scale = |v: &[f64], x: &DMatrix<f64>| DMatrix::from_fn(n, n, |i, j| v[i] * x[(i, j)]);
    let dt1 = -(&binv * (row_scale(&b1, &dt) + DMatrix::identity(n, n) * (2.0 * c)));
    let dt2 = -(&binv
        * (row_scale(&b.diag, &dt)
            + row_scale(&b1, &dt1) * 2.0
            + DMatrix::identity(n, n) * (2.0 * s)));
    // with D = diag(−(l+½)): T′ = −S P S, P = DM + M′ + MD; T″ = −S(DP + P′ + PD)S
    let dmd = |x: &DMatrix<f64>| DMatrix::from_fn(n, n, |i, j| (dv[i] + dv[j]) * x[(i, j)]);
    let p = dmd(&mm) + &dt1;
    let p1 = dmd(&dt1) + &dt2;
    let q = dmd(&p) + p1;
    Ok(SideT {
        t,
        d1: sandwich(&p),
        d2: sandwich(&q),
    })
}

/// `ln det(1 − N_m)` for one azimuthal number.
fn log_det_m(bg: &BisphericalGeometry, m: usize, l_max: usize) -> Result<f64> {
    let tp = side(bg.mu_plus, m, l_max, false)?.t;
    let tm = side(-bg.mu_minus, m, l_max, false)?.t;
    let n = tm * tp;
    let dim = n.nrows();
    let (sign, log_abs) = log_det_lu(DMatrix::identity(dim, dim) - n)?;
    if sign <= 0.0 {
        return Err(CasimirError::Factorization(format!(
            "det(1 - N) not positive for Neumann m = {m}"
        )));
    }
    Ok(log_abs)
}

/// Neumann zero-frequency energy (eV) with `l, m ≤ l_max`.
pub fn neumann_energy(geom: &SphereGeometry, t: f64, l_max: usize) -> Result<f64> {
    let bg = BisphericalGeometry::from_spheres(geom)?;
    let terms: Vec<f64> = (0..=l_max)
        .into_par_iter()
        .map(|m| log_det_m(&bg, m, l_max))
        .collect::<Result<_>>()?;
    let weighted = terms
        .iter()
        .enumerate()
        .fold(0.0, |acc, (m, v)| acc + if m == 0 { 0.5 * v } else { *v });
    Ok(thermal_energy(t) * weighted)
}

/// Per-`m` energy, force and gradient (units of `k_BT`, unweighted).
fn classical_m(
    bg: &BisphericalGeometry,
    dp: MuDerivatives,
    dm: MuDerivatives,
    m: usize,
    l_max: usize,
) -> Result<(f64, f64, f64)> {
    let p = side(bg.mu_plus, m, l_max, true)?;
    let q = side(-bg.mu_minus, m, l_max, true)?;
    let ta_p = &p.d1 * dp.d1;
    let taa_p = &p.d2 * (dp.d1 * dp.d1) + &p.d1 * dp.d2;
    let ta_m = &q.d1 * dm.d1;
    let taa_m = &q.d2 * (dm.d1 * dm.d1) + &q.d1 * dm.d2;
    let n = &q.t * &p.t;
    let na = &ta_m * &p.t + &q.t * &ta_p;
    let naa = &taa_m * &p.t + (&ta_m * &ta_p) * 2.0 + &q.t * &taa_p;
    let dim = n.nrows();
    let lu = (DMatrix::identity(dim, dim) - n).lu();
    let (sign, log_abs) = {
        let mut sign: f64 = lu.p().determinant();
        let mut log_abs = 0.0;
        let u = lu.u();
        for i in 0..dim {
            sign *= u[(i, i)].signum();
            log_abs += u[(i, i)].abs().ln();
        }
        (sign, log_abs)
    };
    if !(sign > 0.0) || !log_abs.is_finite() {
        return Err(CasimirError::Factorization(format!(
            "det(1 - N) not positive for Neumann m = {m}"
        )));
    }
    let x = lu
        .solve(&na)
        .ok_or_else(|| CasimirError::Factorization(format!("singular 1 - N at m = {m}")))?;
    let y = lu
        .solve(&naa)
        .ok_or_else(|| CasimirError::Factorization(format!("singular 1 - N at m = {m}")))?;
    let tr_x = x.trace();
    let tr_x2 = x.component_mul(&x.transpose()).sum();
    Ok((log_abs, tr_x, y.trace() + tr_x2))
}

/// Neumann term with analytic gap derivatives of the T-matrices.
pub fn neumann_classical(
    geom: &SphereGeometry,
    t: f64,
    opts: &BisphericalOptions,
) -> Result<ClassicalResult> {
    let l_max = l_max_for(geom, opts)?;
    let bg = BisphericalGeometry::from_spheres(geom)?;
    let (dp, dm) = BisphericalGeometry::mu_derivatives(geom);
    let terms: Vec<(f64, f64, f64)> = (0..=l_max)
        .into_par_iter()
        .map(|m| classical_m(&bg, dp, dm, m, l_max))
        .collect::<Result<_>>()?;
    let kt = thermal_energy(t);
    let (mut e, mut f, mut g) = (0.0, 0.0, 0.0);
    for (m, (te, tf, tg)) in terms.iter().enumerate() {
        let w = if m == 0 { 0.5 } else { 1.0 };
        e += w * te;
        f += w * tf;
        g += w * tg;
    }
    Ok(ClassicalResult {
        energy: kt * e,
        force: kt * f,
        gradient: kt * g,
        l_max,
        m_max: l_max,
        converged: true,
    })
}

/// Neumann term with Richardson differences of the energy.
pub fn neumann_classical_fd(
    geom: &SphereGeometry,
    t: f64,
    opts: &BisphericalOptions,
) -> Result<ClassicalResult> {
    let l_max = l_max_for(geom, opts)?;
    let d = derivatives(
        |a| neumann_energy(&geom.with_gap(a), t, l_max),
        geom.a,
        1e-3 * geom.a,
    )?;
    Ok(ClassicalResult {
        energy: d.value,
        force: -d.first,
        gradient: -d.second,
        l_max,
        m_max: l_max,
        converged: true,
    })
}
