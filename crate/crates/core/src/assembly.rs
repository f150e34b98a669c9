//! Beyond-PFA deviations: classical and positive-mode parts combined.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::bispherical::{
    pc_classical, tm_classical, BisphericalOptions, Boundary, ClassicalResult,
};
use crate::de_positive::{positive_modes, KappaSource, TablePrescription};
use crate::error::{CasimirError, Result};
use crate::geometry::SphereGeometry;
use crate::lifshitz::{free_energy_pp, pressure_pp, LifshitzOptions, ModeFilter};
use crate::materials::PermittivityModel;
use crate::plasma::{te_plasma_classical, PlasmaFrequencies, PlasmaOptions};
use crate::units::HBAR_C;

/// Zero-frequency extrapolation of the permittivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prescription {
    Drude,
    Plasma,
    PerfectConductor,
}

/// How the plasma TE zero mode is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlasmaClassicalMode {
    /// Exact when `max(N₁, N₂) ≤ 1200` and both bodies are spheres, otherwise substituted.
    #[default]
    Auto,
    Exact,
    /// `β_{n=0}` and `β̃_{n=0}` of perfect conductors applied to the plasma PFA terms.
    PcSubstitute,
}

/// Largest `max(N₁, N₂)` for which [`PlasmaClassicalMode::Auto`] runs the exact TE computation.
pub const EXACT_PLASMA_MAX_N1: usize = 1200;

/// Conductors, their response and the temperature.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModelSpec {
    pub prescription: Prescription,
    pub boundary: Boundary,
    /// `ħω_p` (eV) per sphere; ignored for perfect conductors.
    pub omega_p: PlasmaFrequencies,
    /// `ħγ` (eV); Drude only.
    pub gamma_ev: f64,
    pub temperature_k: f64,
    #[serde(default)]
    pub kappa_source: KappaSource,
    #[serde(default)]
    pub plasma_classical: PlasmaClassicalMode,
}

impl ModelSpec {
    /// Gold-like parameters (`ħω_p = 9 eV`, `ħγ = 0.035 eV`) at 300 K.
    pub fn gold(prescription: Prescription, boundary: Boundary) -> Self {
        Self {
            prescription,
            boundary,
            omega_p: PlasmaFrequencies::equal(9.0),
            gamma_ev: 0.035,
            temperature_k: 300.0,
            kappa_source: KappaSource::Table,
            plasma_classical: PlasmaClassicalMode::Auto,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature_k > 0.0 && self.temperature_k.is_finite()) {
            return Err(CasimirError::InvalidArgument(format!(
                "temperature must be positive (got {} K)",
                self.temperature_k
            )));
        }
        if self.prescription == Prescription::Drude && !(self.gamma_ev > 0.0) {
            return Err(CasimirError::InvalidArgument(format!(
                "Drude model needs γ > 0 (got {} eV)",
                self.gamma_ev
            )));
        }
        Ok(())
    }

    /// Permittivities of sphere 1 and sphere 2.
    pub fn permittivities(&self) -> Result<(PermittivityModel, PermittivityModel)> {
        self.validate()?;
        let PlasmaFrequencies { sphere1, sphere2 } = self.omega_p;
        Ok(match self.prescription {
            Prescription::Drude => (
                PermittivityModel::drude(sphere1, self.gamma_ev)?,
                PermittivityModel::drude(sphere2, self.gamma_ev)?,
            ),
            Prescription::Plasma => (
                PermittivityModel::plasma(sphere1)?,
                PermittivityModel::plasma(sphere2)?,
            ),
            Prescription::PerfectConductor => (
                PermittivityModel::PerfectConductor,
                PermittivityModel::PerfectConductor,
            ),
        })
    }

    /// DE tables for the positive modes; perfect conductors use the plasma ones.
    pub fn table(&self) -> TablePrescription {
        match self.prescription {
            Prescription::Drude => TablePrescription::Drude,
            Prescription::Plasma | Prescription::PerfectConductor => TablePrescription::Plasma,
        }
    }
}

/// Numerical settings shared by all parts.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct DeviationOptions {
    pub lifshitz: LifshitzOptions,
    pub bispherical: BisphericalOptions,
    pub plasma: PlasmaOptions,
}

/// All outputs of [`deviation`]. Forces in eV/µm, gradients in eV/µm².
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeviationResult {
    pub a_um: f64,
    pub force_pfa: f64,
    pub force: f64,
    pub beta: f64,
    pub gradient_pfa: f64,
    pub gradient: f64,
    pub beta_tilde: f64,
    pub w: f64,
    pub w_tilde: f64,
    pub force_n0: f64,
    pub force_npos: f64,
    pub force_pfa_n0: f64,
    pub force_pfa_npos: f64,
    pub gradient_n0: f64,
    pub gradient_npos: f64,
    pub gradient_pfa_n0: f64,
    pub gradient_pfa_npos: f64,
    pub beta_n0: f64,
    pub beta_npos: f64,
    pub beta_tilde_n0: f64,
    pub beta_tilde_npos: f64,
    /// `F/F^{id}_PFA` with the ideal zero-temperature PFA force.
    pub force_over_ideal: f64,
    pub gradient_over_ideal: f64,
    /// Whether the plasma TE zero mode was substituted by the perfect conductor.
    pub pc_substitute: bool,
}

/// `(F^{id}_PFA, F′^{id}_PFA) = (−π³ħcR̃/(360a³), π³ħcR̃/(120a⁴))`.
pub fn ideal_pfa_norms(geom: &SphereGeometry) -> (f64, f64) {
    let (r, a) = (geom.r_eff(), geom.a);
    let c = PI.powi(3) * HBAR_C * r;
    (-c / (360.0 * a.powi(3)), c / (120.0 * a.powi(4)))
}

/// Zero-frequency share `(w, w̃)` of the PFA force and gradient.
pub fn weights(a: f64, model: &ModelSpec, o: &LifshitzOptions) -> Result<(f64, f64)> {
    let (m1, m2) = model.permittivities()?;
    let t = model.temperature_k;
    let e0 = free_energy_pp(a, t, &m1, &m2, ModeFilter::ZERO, o)?.value;
    let e = free_energy_pp(a, t, &m1, &m2, ModeFilter::ALL, o)?.value;
    let p0 = pressure_pp(a, t, &m1, &m2, ModeFilter::ZERO, o)?.value;
    let p = pressure_pp(a, t, &m1, &m2, ModeFilter::ALL, o)?.value;
    Ok((e0 / e, p0 / p))
}

/// `(R̃/a)(F/F_PFA − 1)`.
fn beta_of(geom: &SphereGeometry, f: f64, f_pfa: f64) -> f64 {
    (f / f_pfa - 1.0) / geom.x()
}

/// PFA force and gradient of the `n = 0` term.
fn pfa_zero(
    geom: &SphereGeometry,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    o: &LifshitzOptions,
) -> Result<(f64, f64)> {
    let r = geom.r_eff();
    let e0 = free_energy_pp(geom.a, t, m1, m2, ModeFilter::ZERO, o)?.value;
    let p0 = pressure_pp(geom.a, t, m1, m2, ModeFilter::ZERO, o)?.value;
    Ok((2.0 * PI * r * e0, -2.0 * PI * r * p0))
}

fn use_pc_substitute(
    geom: &SphereGeometry,
    mode: PlasmaClassicalMode,
    opts: &PlasmaOptions,
) -> Result<bool> {
    match mode {
        PlasmaClassicalMode::PcSubstitute => Ok(true),
        PlasmaClassicalMode::Exact if geom.is_sphere_plate() => Err(CasimirError::InvalidArgument(
            "the exact plasma TE zero mode needs two finite spheres; use the perfect-conductor substitute".into(),
        )),
        PlasmaClassicalMode::Exact => Ok(false),
        PlasmaClassicalMode::Auto => {
            if geom.is_sphere_plate() {
                warn!("sphere-plate plasma: using the perfect-conductor TE zero mode");
                return Ok(true);
            }
            let n = (opts.c_n * geom.r1.max(geom.r2) / geom.a).ceil() as usize;
            if n > EXACT_PLASMA_MAX_N1 {
                warn!("{n} multipoles > {EXACT_PLASMA_MAX_N1}: using the perfect-conductor TE zero mode");
            }
            Ok(n > EXACT_PLASMA_MAX_N1)
        }
    }
}

/// Classical force and gradient `(F_{n=0}, F′_{n=0})`, given its PFA part,
/// and whether the plasma substitute was used.
fn classical_part(
    geom: &SphereGeometry,
    model: &ModelSpec,
    pfa0: (f64, f64),
    opts: &DeviationOptions,
) -> Result<((f64, f64), bool)> {
    let t = model.temperature_k;
    let pair = |c: ClassicalResult| (c.force, c.gradient);
    match model.prescription {
        Prescription::Drude => Ok((
            pair(tm_classical(geom, t, model.boundary, &opts.bispherical)?),
            false,
        )),
        Prescription::PerfectConductor => Ok((
            pair(pc_classical(geom, t, model.boundary, &opts.bispherical)?.total),
            false,
        )),
        Prescription::Plasma => {
            if use_pc_substitute(geom, model.plasma_classical, &opts.plasma)? {
                let pc = pc_classical(geom, t, model.boundary, &opts.bispherical)?.total;
                let ideal = PermittivityModel::PerfectConductor;
                let (f_pc, g_pc) = pfa_zero(geom, t, &ideal, &ideal, &opts.lifshitz)?;
                let b0 = beta_of(geom, pc.force, f_pc);
                let bt0 = beta_of(geom, pc.gradient, g_pc);
                let x = geom.x();
                return Ok(((pfa0.0 * (1.0 + b0 * x), pfa0.1 * (1.0 + bt0 * x)), true));
            }
            let tm = tm_classical(geom, t, model.boundary, &opts.bispherical)?;
            let te = te_plasma_classical(geom, t, model.omega_p, &opts.plasma)?;
            Ok((pair(tm.sum(&te)), false))
        }
    }
}

/// Full force, gradient and their deviations from PFA at `geom.a`.
pub fn deviation(
    geom: &SphereGeometry,
    model: &ModelSpec,
    opts: &DeviationOptions,
) -> Result<DeviationResult> {
    let (m1, m2) = model.permittivities()?;
    let t = model.temperature_k;
    let pos = positive_modes(
        geom,
        t,
        &m1,
        &m2,
        model.table(),
        model.kappa_source,
        &opts.lifshitz,
    )?;
    let pfa0 = pfa_zero(geom, t, &m1, &m2, &opts.lifshitz)?;
    let ((f0, g0), pc_substitute) = classical_part(geom, model, pfa0, opts)?;

    let force_pfa = pfa0.0 + pos.force_pfa;
    let gradient_pfa = pfa0.1 + pos.gradient_pfa;
    let force = f0 + pos.force;
    let gradient = g0 + pos.gradient;
    let (f_id, g_id) = ideal_pfa_norms(geom);
    let r = DeviationResult {
        a_um: geom.a,
        force_pfa,
        force,
        beta: beta_of(geom, force, force_pfa),
        gradient_pfa,
        gradient,
        beta_tilde: beta_of(geom, gradient, gradient_pfa),
        w: pfa0.0 / force_pfa,
        w_tilde: pfa0.1 / gradient_pfa,
        force_n0: f0,
        force_npos: pos.force,
        force_pfa_n0: pfa0.0,
        force_pfa_npos: pos.force_pfa,
        gradient_n0: g0,
        gradient_npos: pos.gradient,
        gradient_pfa_n0: pfa0.1,
        gradient_pfa_npos: pos.gradient_pfa,
        beta_n0: beta_of(geom, f0, pfa0.0),
        beta_npos: pos.beta,
        beta_tilde_n0: beta_of(geom, g0, pfa0.1),
        beta_tilde_npos: pos.beta_tilde,
        force_over_ideal: force / f_id,
        gradient_over_ideal: gradient / g_id,
        pc_substitute,
    };
    r.check_identities()?;
    Ok(r)
}

impl DeviationResult {
    /// Largest violation of `β = wβ_{n=0} + (1−w)β_{n>0}` and its gradient analogue.
    pub fn identity_residual(&self) -> f64 {
        let b = self.w * self.beta_n0 + (1.0 - self.w) * self.beta_npos;
        let bt = self.w_tilde * self.beta_tilde_n0 + (1.0 - self.w_tilde) * self.beta_tilde_npos;
        ((b - self.beta) / self.beta.abs().max(1.0))
            .abs()
            .max(((bt - self.beta_tilde) / self.beta_tilde.abs().max(1.0)).abs())
    }

    fn check_identities(&self) -> Result<()> {
        let res = self.identity_residual();
        if !(res <= 1e-10) {
            return Err(CasimirError::Internal(format!(
                "β decomposition violated by {res:e} at a = {} µm",
                self.a_um
            )));
        }
        if !(self.w > 0.0 && self.w < 1.0 && self.w_tilde > 0.0 && self.w_tilde < 1.0) {
            return Err(CasimirError::Internal(format!(
                "weights w = {}, w̃ = {} outside (0, 1)",
                self.w, self.w_tilde
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ZETA3;

    #[test]
    fn ideal_norms() {
        let g = SphereGeometry::new(10.0, 10.0, 0.2).unwrap();
        let (f, fp) = ideal_pfa_norms(&g);
        let (f2, fp2) = ideal_pfa_norms(&g.with_gap(0.4));
        assert!((f / f2 - 8.0).abs() < 1e-12 && (fp / fp2 - 16.0).abs() < 1e-12);
        assert!((fp / f.abs() - 3.0 / 0.2).abs() < 1e-10);
        let (fb, _) = ideal_pfa_norms(&SphereGeometry::new(20.0, 20.0, 0.2).unwrap());
        assert!((fb / f - 2.0).abs() < 1e-12);
    }

    #[test]
    fn weights_behave() {
        let o = LifshitzOptions::default();
        let dr = ModelSpec::gold(Prescription::Drude, Boundary::Grounded);
        let pl = ModelSpec::gold(Prescription::Plasma, Boundary::Grounded);
        let mut last = 0.0;
        for a in [0.1, 0.3, 1.0, 2.0] {
            let (wd, wdt) = weights(a, &dr, &o).unwrap();
            let (wp, _) = weights(a, &pl, &o).unwrap();
            assert!(wd > last && wd < 1.0 && wdt > 0.0 && wdt < 1.0);
            assert!(wp > wd);
            last = wd;
        }
        assert!(weights(30.0, &dr, &o).unwrap().0 > 0.9);
    }

    #[test]
    fn grounded_drude_near_field_constant() {
        let g = SphereGeometry::new(100.0, 100.0, 0.1).unwrap();
        let r = deviation(
            &g,
            &ModelSpec::gold(Prescription::Drude, Boundary::Grounded),
            &DeviationOptions::default(),
        )
        .unwrap();
        let target = 1.0 / (6.0 * ZETA3);
        assert!((r.beta_n0 - target).abs() < 0.02, "{}", r.beta_n0);
        assert!(r.identity_residual() < 1e-12);
        assert!(!r.pc_substitute);
    }

    #[test]
    fn drude_needs_damping() {
        let mut m = ModelSpec::gold(Prescription::Drude, Boundary::Grounded);
        m.gamma_ev = 0.0;
        assert!(m.permittivities().is_err());
        m.prescription = Prescription::PerfectConductor;
        assert!(m.permittivities().is_ok());
    }

    #[test]
    fn sphere_plate_plasma_falls_back() {
        let g = SphereGeometry::sphere_plate(20.0, 0.5).unwrap();
        let r = deviation(
            &g,
            &ModelSpec::gold(Prescription::Plasma, Boundary::Grounded),
            &DeviationOptions::default(),
        )
        .unwrap();
        assert!(r.pc_substitute);
        let mut exact = ModelSpec::gold(Prescription::Plasma, Boundary::Grounded);
        exact.plasma_classical = PlasmaClassicalMode::Exact;
        assert!(deviation(&g, &exact, &DeviationOptions::default()).is_err());
    }
}
