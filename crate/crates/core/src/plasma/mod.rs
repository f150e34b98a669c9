//! Zero-frequency TE term for plasma spheres in the spherical-multipole basis.
//!
//! Each azimuthal number `m` contributes `ln det(1 − A_m A_mᵀ)`, where `A_m`
//! is the symmetrized product of the Mie ratios and the translation
//! coefficients. Its weight is concentrated on an oblique strip of width
//! `~R_i/√(R̃a)`, which is what the strip storage and the block decimation
//! exploit.

mod mie;
mod plan;
mod strip;

pub use mie::{mie_ratio, mie_ratios};
pub use plan::{Decimation, PlasmaOptions, TruncationPlan};
pub use strip::StripMatrix;

use std::io::{Read, Write};

use log::warn;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bispherical::{tm_classical, BisphericalOptions, Boundary, ClassicalResult};
use crate::error::{CasimirError, Result};
use crate::geometry::SphereGeometry;
use crate::richardson::{derivatives, Derivatives};
use crate::special::LogFactorials;
use crate::units::{thermal_energy, HBAR_C};
use strip::{build_a_strip, SphereTerms};

/// Plasma frequencies `ħω_p` (eV) of the two spheres; `f64::INFINITY` is a
/// perfect conductor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlasmaFrequencies {
    pub sphere1: f64,
    pub sphere2: f64,
}

impl PlasmaFrequencies {
    pub fn equal(omega_p_ev: f64) -> Self {
        Self {
            sphere1: omega_p_ev,
            sphere2: omega_p_ev,
        }
    }
}

fn w_of(omega_p_ev: f64, radius: f64) -> Result<Option<f64>> {
    if omega_p_ev.is_infinite() && omega_p_ev > 0.0 {
        return Ok(None);
    }
    if !(omega_p_ev > 0.0) {
        return Err(CasimirError::InvalidArgument(format!(
            "plasma frequency must be positive (got {omega_p_ev} eV)"
        )));
    }
    Ok(Some(omega_p_ev * radius / HBAR_C))
}

/// Per-`m` log-determinant in the order it was computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogDetTerm {
    pub m: usize,
    pub dim: usize,
    pub value: f64,
}

/// The TE operator for a fixed pair of spheres and a truncation frozen at one gap.
pub struct TePlasma {
    geom: SphereGeometry,
    plan: TruncationPlan,
    s1: SphereTerms,
    s2: SphereTerms,
    lf: LogFactorials,
    fd_step: f64,
}

impl TePlasma {
    pub fn new(
        geom: &SphereGeometry,
        omega_p: PlasmaFrequencies,
        opts: &PlasmaOptions,
    ) -> Result<Self> {
        let plan = TruncationPlan::new(geom, opts)?;
        Self::with_plan(geom, omega_p, plan, opts.fd_step)
    }

    pub fn with_plan(
        geom: &SphereGeometry,
        omega_p: PlasmaFrequencies,
        plan: TruncationPlan,
        fd_step: f64,
    ) -> Result<Self> {
        if !(fd_step > 0.0 && fd_step < 0.1) {
            return Err(CasimirError::InvalidArgument(format!(
                "finite-difference step {fd_step} must lie in (0, 0.1)"
            )));
        }
        let r1 = mie_ratios(plan.n1 + plan.m_max, w_of(omega_p.sphere1, geom.r1)?)?;
        let r2 = mie_ratios(plan.n2 + plan.m_max, w_of(omega_p.sphere2, geom.r2)?)?;
        Ok(Self {
            geom: *geom,
            plan,
            s1: SphereTerms::new(&r1),
            s2: SphereTerms::new(&r2),
            lf: LogFactorials::new(plan.n1 + plan.n2 + 2 * plan.m_max + 1),
            fd_step,
        })
    }

    pub fn plan(&self) -> &TruncationPlan {
        &self.plan
    }

    /// `A_m` at gap `a` (radii fixed).
    pub fn strip(&self, m: usize, a: f64) -> Result<StripMatrix> {
        build_a_strip(
            m,
            &self.geom.with_gap(a),
            &self.plan,
            &self.s1,
            &self.s2,
            &self.lf,
        )
    }

    /// `ln det(1 − A_mA_mᵀ)` at gap `a`, decimated when the plan says so.
    pub fn log_det(&self, m: usize, a: f64) -> Result<LogDetTerm> {
        let strip = self.strip(m, a)?;
        let fail = |_| CasimirError::NotPositiveDefinite { m };
        if self.plan.is_decimated() {
            let ad = strip.decimate(self.plan.p1, self.plan.p2);
            let n = ad.nrows();
            let value = dense_log_det(&ad).ok_or(CasimirError::NotPositiveDefinite { m })?;
            return Ok(LogDetTerm { m, dim: n, value });
        }
        let (n, _) = strip.dims();
        let value = if self.plan.half_width.is_some() {
            strip
                .one_minus_aat_band()
                .cholesky_log_det()
                .map_err(fail)?
        } else {
            dense_log_det(&strip.to_dense()).ok_or(CasimirError::NotPositiveDefinite { m })?
        };
        Ok(LogDetTerm { m, dim: n, value })
    }

    /// All `m = 0..=m_max` terms at gap `a`, evaluated in parallel.
    pub fn log_dets(&self, a: f64) -> Result<Vec<LogDetTerm>> {
        (0..=self.plan.m_max)
            .into_par_iter()
            .map(|m| self.log_det(m, a))
            .collect()
    }

    /// `k_BT Σ′_m ln det(1 − A_mA_mᵀ)` with weight ½ at `m = 0`.
    pub fn energy(&self, t: f64, a: f64) -> Result<f64> {
        Ok(thermal_energy(t) * weighted_sum(&self.log_dets(a)?))
    }

    /// Energy, force and gradient of the single term `m`.
    pub fn derivatives_m(&self, t: f64, m: usize) -> Result<Derivatives> {
        let wm = if m == 0 { 0.5 } else { 1.0 };
        let kt = thermal_energy(t);
        derivatives(
            |a| Ok(kt * wm * self.log_det(m, a)?.value),
            self.geom.a,
            self.h(),
        )
    }

    fn h(&self) -> f64 {
        self.fd_step * self.geom.a
    }
}

fn dense_log_det(a: &DMatrix<f64>) -> Option<f64> {
    let n = a.nrows();
    let m = DMatrix::identity(n, n) - a * a.transpose();
    crate::linalg::cholesky_log_det(m)
}

fn weighted_sum(terms: &[LogDetTerm]) -> f64 {
    terms
        .iter()
        .map(|t| if t.m == 0 { 0.5 * t.value } else { t.value })
        .sum()
}

fn classical_once(te: &TePlasma, t: f64) -> Result<ClassicalResult> {
    let kt = thermal_energy(t);
    let terms = te.log_dets(te.geom.a)?;
    let total = weighted_sum(&terms);
    let last = terms.last().map_or(0.0, |l| l.value.abs());
    let d = derivatives(|a| te.energy(t, a), te.geom.a, te.h())?;
    Ok(ClassicalResult {
        energy: kt * total,
        force: -d.first,
        gradient: -d.second,
        l_max: te.plan.n1,
        m_max: te.plan.m_max,
        converged: last <= 1e-3 * total.abs(),
    })
}

/// Zero-frequency TE energy, force and gradient of two plasma spheres.
///
/// The truncation is fixed at `geom.a` and reused at the shifted gaps of the
/// finite differences. If a decimated `1 − ÃÃᵀ` is not positive definite the
/// block sizes are halved once and the computation repeated.
pub fn te_plasma_classical(
    geom: &SphereGeometry,
    t: f64,
    omega_p: PlasmaFrequencies,
    opts: &PlasmaOptions,
) -> Result<ClassicalResult> {
    let te = TePlasma::new(geom, omega_p, opts)?;
    match classical_once(&te, t) {
        Err(CasimirError::NotPositiveDefinite { m }) if te.plan.is_decimated() => {
            let plan = te.plan.halved_blocks();
            warn!(
                "1 - AA^T lost positivity at m = {m}; retrying with blocks {}x{}",
                plan.p1, plan.p2
            );
            classical_once(&TePlasma::with_plan(geom, omega_p, plan, opts.fd_step)?, t)
        }
        r => r,
    }
}

/// TM and TE parts of the plasma zero-frequency term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlasmaClassical {
    pub total: ClassicalResult,
    pub tm: ClassicalResult,
    pub te: ClassicalResult,
}

/// TM from the bispherical solution for `boundary`, TE from [`te_plasma_classical`].
pub fn plasma_classical_total(
    geom: &SphereGeometry,
    t: f64,
    omega_p: PlasmaFrequencies,
    boundary: Boundary,
    opts: &PlasmaOptions,
    bisp: &BisphericalOptions,
) -> Result<PlasmaClassical> {
    let tm = tm_classical(geom, t, boundary, bisp)?;
    let te = te_plasma_classical(geom, t, omega_p, opts)?;
    Ok(PlasmaClassical {
        total: tm.sum(&te),
        tm,
        te,
    })
}

/// Writes log-det terms as little-endian records `(u64 m, u64 dim, f64 value)`.
pub fn write_log_dets<W: Write>(mut out: W, terms: &[LogDetTerm]) -> Result<()> {
    for t in terms {
        out.write_all(&(t.m as u64).to_le_bytes())?;
        out.write_all(&(t.dim as u64).to_le_bytes())?;
        out.write_all(&t.value.to_le_bytes())?;
    }
    Ok(())
}

/// Reads records written by [`write_log_dets`].
pub fn read_log_dets<R: Read>(mut input: R) -> Result<Vec<LogDetTerm>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() % 24 != 0 {
        return Err(CasimirError::InvalidArgument(format!(
            "dump length {} is not a multiple of 24",
            bytes.len()
        )));
    }
    let word = |c: &[u8]| <[u8; 8]>::try_from(c).expect("8-byte chunk");
    Ok(bytes
        .chunks_exact(24)
        .map(|r| LogDetTerm {
            m: u64::from_le_bytes(word(&r[0..8])) as usize,
            dim: u64::from_le_bytes(word(&r[8..16])) as usize,
            value: f64::from_le_bytes(word(&r[16..24])),
        })
        .collect())
}
