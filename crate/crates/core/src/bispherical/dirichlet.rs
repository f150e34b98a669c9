//! Grounded conductors: the Dirichlet zero mode is diagonal in bispherical
//! multipoles, `E = (k_BT/2) Σ_l (2l+1) ln(1 − Z^{2l+1})`.

use crate::error::Result;
use crate::geometry::{BisphericalGeometry, SphereGeometry};
use crate::units::thermal_energy;

use super::ClassicalResult;

/// `Σ_l w_l ln(1 − Z^{2l+1})` for `l ≥ l_start` with its first two `Z` derivatives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DiagonalSeries {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub l_last: usize,
}

pub(crate) fn diagonal_series(
    z: f64,
    l_start: usize,
    weight: impl Fn(usize) -> f64,
) -> DiagonalSeries {
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    let mut l = l_start;
    loop {
        let k = (2 * l + 1) as f64;
        let zk = z.powf(k);
        if zk < 1e-300 {
            // remaining terms are exact zeros in double precision
            break;
        }
        let w = weight(l);
        let one_minus = 1.0 - zk;
        let t0 = w * (-zk).ln_1p();
        let t1 = -w * k * zk / z / one_minus;
        let t2 =
            -w * k * (2.0 * l as f64 * zk / (z * z) + zk * zk / (z * z)) / (one_minus * one_minus);
        s0 += t0;
        s1 += t1;
        s2 += t2;
        let tiny = |t: f64, s: f64| t.abs() <= 1e-16 * s.abs();
        if tiny(t0, s0) && tiny(t1, s1) && tiny(t2, s2) {
            break;
        }
        l += 1;
    }
    DiagonalSeries {
        s0,
        s1,
        s2,
        l_last: l,
    }
}

/// Dirichlet energy (eV) at a given `Z` and the last multipole used.
pub fn dirichlet_energy(z: f64, t: f64) -> (f64, usize) {
    let s = diagonal_series(z, 0, |l| (2 * l + 1) as f64);
    (0.5 * thermal_energy(t) * s.s0, s.l_last)
}

/// Weighted diagonal series mapped to energy, force and gradient through `Z(a)`.
pub(crate) fn diagonal_classical(
    geom: &SphereGeometry,
    t: f64,
    l_start: usize,
    weight: impl Fn(usize) -> f64,
) -> Result<ClassicalResult> {
    BisphericalGeometry::from_spheres(geom)?;
    let (z, z1, z2) = BisphericalGeometry::z_derivatives(geom);
    let s = diagonal_series(z, l_start, weight);
    let c = 0.5 * thermal_energy(t);
    Ok(ClassicalResult {
        energy: c * s.s0,
        force: -c * s.s1 * z1,
        gradient: -c * (s.s2 * z1 * z1 + s.s1 * z2),
        l_max: s.l_last,
        m_max: s.l_last,
        converged: true,
    })
}

/// Dirichlet (grounded) zero-frequency term with analytic gap derivatives.
pub fn dirichlet_classical(geom: &SphereGeometry, t: f64) -> Result<ClassicalResult> {
    diagonal_classical(geom, t, 0, |l| (2 * l + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::richardson::derivatives;

    #[test]
    fn brute_force_sum_at_half() {
        let brute: f64 = (0..200)
            .map(|l| (2 * l + 1) as f64 * (1.0 - 0.5f64.powi(2 * l + 1)).ln())
            .sum();
        let (e, _) = dirichlet_energy(0.5, 300.0);
        let kt = thermal_energy(300.0);
        assert!((e / (0.5 * kt) - brute).abs() < 1e-14);
        assert!((brute + 1.332_579_307_978_516).abs() < 1e-13);
    }

    #[test]
    fn single_term_at_small_z() {
        let z = 1e-6;
        let (e, _) = dirichlet_energy(z, 300.0);
        let kt = thermal_energy(300.0);
        assert!((e / (-0.5 * kt * z) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn analytic_derivatives_match_richardson() {
        for g in [
            SphereGeometry::new(10.0, 10.0, 0.2).unwrap(),
            SphereGeometry::new(5.0, 30.0, 2.0).unwrap(),
            SphereGeometry::sphere_plate(8.0, 0.1).unwrap(),
        ] {
            let r = dirichlet_classical(&g, 300.0).unwrap();
            let d = derivatives(
                |a| Ok(dirichlet_classical(&g.with_gap(a), 300.0)?.energy),
                g.a,
                1e-3 * g.a,
            )
            .unwrap();
            assert!((-d.first / r.force - 1.0).abs() < 1e-8);
            assert!((-d.second / r.gradient - 1.0).abs() < 1e-6);
            assert!(r.energy < 0.0 && r.force < 0.0 && r.gradient > 0.0);
        }
    }
}
