//! Isolated conductors: only the `m = 0` TM block differs from Dirichlet, since
//! removing the monopole couples all axially symmetric multipoles.

use nalgebra::DMatrix;

use crate::error::{CasimirError, Result};
use crate::geometry::{BisphericalGeometry, SphereGeometry};
use crate::linalg::log_det_one_minus;
use crate::richardson::derivatives;
use crate::units::thermal_energy;

use super::dirichlet::diagonal_series;
use super::{l_max_for, BisphericalOptions, ClassicalResult};

/// `(T₀)_{l,l′} = [δ_{ll′} + (1 − Z²)(1 − Z^{2l′})] Z^{2l+1}` for `l, l′ ∈ [1, l_max]`.
fn t0(z: f64, l_max: usize) -> DMatrix<f64> {
    let col: Vec<f64> = (1..=l_max)
        .map(|l| (1.0 - z * z) * (1.0 - z.powi(2 * l as i32)))
        .collect();
    DMatrix::from_fn(l_max, l_max, |i, j| {
        let l = i + 1;
        let diag = if i == j { 1.0 } else { 0.0 };
        (diag + col[j]) * z.powi(2 * l as i32 + 1)
    })
}

/// Round-trip matrix `N₀ = T₀⁽⁻⁾ T₀⁽⁺⁾` of the `m = 0` block.
pub fn isolated_m0_matrix(z_minus: f64, z_plus: f64, l_max: usize) -> DMatrix<f64> {
    t0(z_minus, l_max) * t0(z_plus, l_max)
}

/// Isolated-conductor zero-frequency energy (eV) at a fixed truncation.
pub fn drude_isolated_energy(geom: &SphereGeometry, t: f64, l_max: usize) -> Result<f64> {
    if l_max < 1 {
        return Err(CasimirError::InvalidArgument(
            "l_max must be at least 1".into(),
        ));
    }
    let bg = BisphericalGeometry::from_spheres(geom)?;
    let n0 = isolated_m0_matrix(bg.z_minus, bg.z_plus, l_max);
    let m0 = log_det_one_minus(&n0)?;
    let rest = diagonal_series(bg.z, 1, |l| (2 * l) as f64).s0;
    Ok(0.5 * thermal_energy(t) * (m0 + rest))
}

/// Isolated-conductor term; force and gradient by Richardson differences at
/// a truncation frozen at the central gap.
pub fn drude_isolated_classical(
    geom: &SphereGeometry,
    t: f64,
    opts: &BisphericalOptions,
) -> Result<ClassicalResult> {
    let l_max = l_max_for(geom, opts)?;
    let d = derivatives(
        |a| drude_isolated_energy(&geom.with_gap(a), t, l_max),
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

/// Closed form for an isolated sphere facing an isolated plane (eV).
pub fn sphere_plate_drude_exact(z: f64, t: f64) -> f64 {
    let mut diag = 0.0;
    let mut coupling = 0.0;
    let mut l = 1;
    loop {
        let zk = z.powi(2 * l + 1);
        if zk < 1e-300 {
            break;
        }
        let d = (2 * l + 1) as f64 * (-zk).ln_1p();
        let c = zk * (1.0 - z.powi(2 * l)) / (1.0 - zk);
        diag += d;
        coupling += c;
        if d.abs() <= 1e-16 * diag.abs() && c.abs() <= 1e-16 * coupling.abs() {
            break;
        }
        l += 1;
    }
    0.5 * thermal_energy(t) * (diag + (-(1.0 - z * z) * coupling).ln_1p())
}
