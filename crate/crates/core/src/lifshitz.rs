//! Lifshitz theory for two parallel half-spaces.
//!
//! With `y = 2aq` every Matsubara term becomes an integral over
//! `y ∈ [2aξ_n/c, ∞)` of a function of `X_α = r_α⁽¹⁾ r_α⁽²⁾ e^{−y}`:
//!
//! * free energy per area: `k_BT/(8πa²) Σ′ ∫ y ln(1 − X)`
//! * pressure: `−k_BT/(8πa³) Σ′ ∫ y² X/(1 − X)`
//! * `𝓖`: `k_BT/(8πa) Σ_{n>0} ∫ Li₂(X)`, the primitive of the `n > 0` free energy.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::materials::{
    matsubara_energy, reflection, zero_frequency_reflection, PermittivityModel, ZeroFrequencyRule,
};
use crate::quadrature::{integrate_exp_tail, Estimate, QuadratureOptions};
use crate::special::dilog;
use crate::units::{thermal_energy, HBAR_C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatsubaraFilter {
    ZeroOnly,
    PositiveOnly,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationFilter {
    TeOnly,
    TmOnly,
    Both,
}

/// Which Matsubara terms and polarizations enter a sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeFilter {
    pub matsubara: MatsubaraFilter,
    pub polarization: PolarizationFilter,
}

impl ModeFilter {
    pub const ALL: Self = Self {
        matsubara: MatsubaraFilter::All,
        polarization: PolarizationFilter::Both,
    };
    pub const ZERO: Self = Self {
        matsubara: MatsubaraFilter::ZeroOnly,
        polarization: PolarizationFilter::Both,
    };
    pub const POSITIVE: Self = Self {
        matsubara: MatsubaraFilter::PositiveOnly,
        polarization: PolarizationFilter::Both,
    };

    fn te(&self) -> bool {
        self.polarization != PolarizationFilter::TmOnly
    }

    fn tm(&self) -> bool {
        self.polarization != PolarizationFilter::TeOnly
    }
}

/// Numerical settings for the plane-parallel sums.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct LifshitzOptions {
    /// Relative tolerance for each `y` integral and for Matsubara termination.
    pub rel_tol: f64,
    /// Hard cap on the Matsubara index.
    pub max_terms: usize,
}

impl Default for LifshitzOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_terms: 1_000_000,
        }
    }
}

/// Plane-parallel quantities with their numerical error estimates.
///
/// `gee` covers the `n > 0` terms only, whatever the filter.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlanarResult {
    /// eV/µm².
    pub free_energy_per_area: Estimate,
    /// eV/µm³.
    pub pressure: Estimate,
    /// eV/µm.
    pub gee: Estimate,
}

#[derive(Clone, Copy)]
enum Quantity {
    Energy,
    Pressure,
    Gee,
}

impl Quantity {
    fn kernel(self, y: f64, x: f64) -> f64 {
        match self {
            Self::Energy => y * (-x).ln_1p(),
            Self::Pressure => y * y * x / (1.0 - x),
            Self::Gee => dilog(x),
        }
    }

    /// Prefactor turning `Σ′ ∫` into physical units.
    fn prefactor(self, kt: f64, a: f64) -> f64 {
        match self {
            Self::Energy => kt / (8.0 * PI * a * a),
            Self::Pressure => -kt / (8.0 * PI * a * a * a),
            Self::Gee => kt / (8.0 * PI * a),
        }
    }
}

fn quad_opts(o: &LifshitzOptions) -> QuadratureOptions {
    QuadratureOptions {
        abs_tol: 0.0,
        rel_tol: o.rel_tol,
        max_segments: 2000,
    }
}

fn check_gap(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(CasimirError::InvalidArgument(format!(
            "gap must be positive (got {a})"
        )));
    }
    Ok(())
}

/// `∫ kernel dy` for the zero-frequency term (weight ½ not included).
fn zero_term(
    q: Quantity,
    a: f64,
    r1: ZeroFrequencyRule,
    r2: ZeroFrequencyRule,
    filter: ModeFilter,
    o: &LifshitzOptions,
) -> Result<Estimate> {
    let f = |y: f64| {
        let k = y / (2.0 * a);
        let (te1, tm1) = zero_frequency_reflection(r1, k);
        let (te2, tm2) = zero_frequency_reflection(r2, k);
        let e = (-y).exp();
        let mut s = 0.0;
        if filter.te() {
            s += q.kernel(y, te1 * te2 * e);
        }
        if filter.tm() {
            s += q.kernel(y, tm1 * tm2 * e);
        }
        s
    };
    integrate_exp_tail(f, 0.0, quad_opts(o))
}

/// `∫ kernel dy` for Matsubara index `n > 0`.
fn positive_term(
    q: Quantity,
    a: f64,
    xi_ev: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    filter: ModeFilter,
    o: &LifshitzOptions,
) -> Result<Estimate> {
    let e1 = m1.epsilon(xi_ev)?;
    let e2 = m2.epsilon(xi_ev)?;
    let k0 = xi_ev / HBAR_C;
    let y0 = 2.0 * a * k0;
    let f = |y: f64| {
        let qn = (y / (2.0 * a)).max(k0);
        let (te1, tm1) = reflection(e1, k0, qn);
        let (te2, tm2) = reflection(e2, k0, qn);
        let e = (-y).exp();
        let mut s = 0.0;
        if filter.te() {
            s += q.kernel(y, te1 * te2 * e);
        }
        if filter.tm() {
            s += q.kernel(y, tm1 * tm2 * e);
        }
        s
    };
    integrate_exp_tail(f, y0, quad_opts(o))
}

fn sum(
    q: Quantity,
    a: f64,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    filter: ModeFilter,
    o: &LifshitzOptions,
) -> Result<Estimate> {
    check_gap(a)?;
    if !(t > 0.0) {
        return Err(CasimirError::InvalidArgument(format!(
            "temperature must be positive (got {t})"
        )));
    }
    let mut total = Estimate::ZERO;
    if filter.matsubara != MatsubaraFilter::PositiveOnly {
        let r1 = m1
            .zero_frequency_rule()
            .ok_or(CasimirError::NoZeroFrequencyRule)?;
        let r2 = m2
            .zero_frequency_rule()
            .ok_or(CasimirError::NoZeroFrequencyRule)?;
        let z = zero_term(q, a, r1, r2, filter, o)?;
        total.value += 0.5 * z.value;
        total.error += 0.5 * z.error;
    }
    if filter.matsubara != MatsubaraFilter::ZeroOnly {
        // ascending n; stop after three consecutive negligible terms
        let mut small = 0;
        let mut positive = Estimate::ZERO;
        for n in 1..=o.max_terms {
            let term = positive_term(q, a, matsubara_energy(t, n), m1, m2, filter, o)?;
            positive += term;
            if term.value.abs() <= o.rel_tol * positive.value.abs() {
                small += 1;
                if small == 3 {
                    break;
                }
            } else {
                small = 0;
            }
            if n == o.max_terms {
                return Err(CasimirError::Quadrature(format!(
                    "Matsubara sum not converged after {n} terms"
                )));
            }
        }
        total += positive;
    }
    let c = q.prefactor(thermal_energy(t), a);
    Ok(Estimate {
        value: c * total.value,
        error: c.abs() * total.error,
    })
}

/// Free energy per unit area `𝓕^pp` (eV/µm²).
pub fn free_energy_pp(
    a: f64,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    filter: ModeFilter,
    o: &LifshitzOptions,
) -> Result<Estimate> {
    sum(Quantity::Energy, a, t, m1, m2, filter, o)
}

/// Pressure `F^pp = −∂𝓕^pp/∂a` (eV/µm³); negative means attraction.
pub fn pressure_pp(
    a: f64,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    filter: ModeFilter,
    o: &LifshitzOptions,
) -> Result<Estimate> {
    sum(Quantity::Pressure, a, t, m1, m2, filter, o)
}

/// `𝓖^pp` (eV/µm) over the positive Matsubara terms, with `∂𝓖/∂a = 𝓕^pp_{n>0}`.
pub fn gee_pp(
    a: f64,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    o: &LifshitzOptions,
) -> Result<Estimate> {
    sum(Quantity::Gee, a, t, m1, m2, ModeFilter::POSITIVE, o)
}

/// All three plane-parallel quantities under one filter.
pub fn planar(
    a: f64,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    filter: ModeFilter,
    o: &LifshitzOptions,
) -> Result<PlanarResult> {
    Ok(PlanarResult {
        free_energy_per_area: free_energy_pp(a, t, m1, m2, filter, o)?,
        pressure: pressure_pp(a, t, m1, m2, filter, o)?,
        gee: gee_pp(a, t, m1, m2, o)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::PermittivityModel as M;
    use crate::quadrature::integrate;
    use crate::units::ZETA3;

    const T: f64 = 300.0;

    fn tight() -> LifshitzOptions {
        LifshitzOptions {
            rel_tol: 1e-12,
            ..Default::default()
        }
    }

    #[test]
    fn zero_frequency_closed_forms() {
        let o = LifshitzOptions::default();
        let kt = thermal_energy(T);
        let a = 0.3;
        let d = M::gold_drude();
        let exact = -kt * ZETA3 / (16.0 * PI * a * a);
        let e = free_energy_pp(a, T, &d, &d, ModeFilter::ZERO, &o).unwrap();
        assert!((e.value / exact - 1.0).abs() < 1e-9);
        let pc = M::PerfectConductor;
        let e = free_energy_pp(a, T, &pc, &pc, ModeFilter::ZERO, &o).unwrap();
        assert!((e.value / (2.0 * exact) - 1.0).abs() < 1e-9);
        let p = pressure_pp(a, T, &d, &d, ModeFilter::ZERO, &o).unwrap();
        assert!((p.value / (-kt * ZETA3 / (8.0 * PI * a.powi(3))) - 1.0).abs() < 1e-9);
        let p2 = pressure_pp(2.0 * a, T, &d, &d, ModeFilter::ZERO, &o).unwrap();
        assert!((p.value / p2.value - 8.0).abs() < 1e-8);
    }

    #[test]
    fn plasma_zero_frequency_approaches_perfect_conductor_from_above() {
        let o = LifshitzOptions::default();
        let pc = free_energy_pp(
            0.2,
            T,
            &M::PerfectConductor,
            &M::PerfectConductor,
            ModeFilter::ZERO,
            &o,
        )
        .unwrap()
        .value;
        let mut last = 0.0;
        for wp in [3.0, 9.0, 30.0, 300.0, 3000.0] {
            let m = M::plasma(wp).unwrap();
            let v = free_energy_pp(0.2, T, &m, &m, ModeFilter::ZERO, &o)
                .unwrap()
                .value;
            assert!(v > pc);
            assert!(v < last);
            last = v;
        }
        assert!((last / pc - 1.0).abs() < 1e-3);
    }

    #[test]
    fn sum_rule_and_signs() {
        let o = LifshitzOptions::default();
        for m in [M::gold_drude(), M::gold_plasma()] {
            let all = free_energy_pp(0.5, T, &m, &m, ModeFilter::ALL, &o).unwrap();
            let zero = free_energy_pp(0.5, T, &m, &m, ModeFilter::ZERO, &o).unwrap();
            let pos = free_energy_pp(0.5, T, &m, &m, ModeFilter::POSITIVE, &o).unwrap();
            let err = all.error + zero.error + pos.error + 1e-14 * all.value.abs();
            assert!((all.value - zero.value - pos.value).abs() <= err);
            assert!(all.value < 0.0);
            let te = free_energy_pp(
                0.5,
                T,
                &m,
                &m,
                ModeFilter {
                    polarization: PolarizationFilter::TeOnly,
                    ..ModeFilter::ALL
                },
                &o,
            )
            .unwrap();
            let tm = free_energy_pp(
                0.5,
                T,
                &m,
                &m,
                ModeFilter {
                    polarization: PolarizationFilter::TmOnly,
                    ..ModeFilter::ALL
                },
                &o,
            )
            .unwrap();
            assert!((te.value + tm.value - all.value).abs() < 1e-10 * all.value.abs());
        }
    }

    #[test]
    fn pressure_is_minus_energy_derivative() {
        let o = tight();
        let m = M::gold_drude();
        let a = 0.4;
        let h = 1e-4 * a;
        let e = |x: f64| {
            free_energy_pp(x, T, &m, &m, ModeFilter::ALL, &o)
                .unwrap()
                .value
        };
        let fd = -(e(a + h) - e(a - h)) / (2.0 * h);
        let p = pressure_pp(a, T, &m, &m, ModeFilter::ALL, &o)
            .unwrap()
            .value;
        assert!((fd / p - 1.0).abs() < 1e-7);
    }

    #[test]
    fn gee_is_primitive_of_positive_free_energy() {
        let o = tight();
        let m = M::gold_drude();
        let a = 0.3;
        let h = 1e-4 * a;
        let g = |x: f64| gee_pp(x, T, &m, &m, &o).unwrap().value;
        let fd = (g(a + h) - g(a - h)) / (2.0 * h);
        let f = free_energy_pp(a, T, &m, &m, ModeFilter::POSITIVE, &o)
            .unwrap()
            .value;
        assert!((fd / f - 1.0).abs() < 1e-5);
        assert!(g(a) > 0.0 && g(2.0 * a) < g(a));

        // 𝓖(a) = −∫_a^∞ 𝓕_{n>0}; the integrand is negligible beyond 20 λ_T
        let lambda = crate::materials::thermal_length(T);
        let qo = QuadratureOptions {
            rel_tol: 1e-9,
            ..Default::default()
        };
        let direct = integrate(
            |x| {
                free_energy_pp(
                    x,
                    T,
                    &m,
                    &m,
                    ModeFilter::POSITIVE,
                    &LifshitzOptions::default(),
                )
                .unwrap()
                .value
            },
            a,
            20.0 * lambda,
            qo,
        )
        .unwrap();
        assert!((-direct.value / g(a) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn vacuum_gee_vanishes() {
        let o = LifshitzOptions::default();
        let thin = M::plasma(1e-6).unwrap();
        let g = gee_pp(0.3, T, &thin, &thin, &o).unwrap().value;
        assert!(g.abs() < 1e-20);
    }

    #[test]
    fn smooth_in_temperature() {
        let o = LifshitzOptions::default();
        let m = M::gold_drude();
        let vals: Vec<f64> = [150.0, 149.0, 148.0]
            .iter()
            .map(|&t| {
                free_energy_pp(0.5, t, &m, &m, ModeFilter::ALL, &o)
                    .unwrap()
                    .value
            })
            .collect();
        let second = vals[0] - 2.0 * vals[1] + vals[2];
        assert!(second.abs() < 1e-4 * vals[1].abs());
    }

    #[test]
    fn tabulated_without_zero_rule_refuses_zero_term() {
        let t = crate::materials::parse_permittivity_table("0.01 1e6\n100 1.5\n").unwrap();
        let o = LifshitzOptions::default();
        assert!(matches!(
            free_energy_pp(0.5, T, &t, &t, ModeFilter::ZERO, &o),
            Err(CasimirError::NoZeroFrequencyRule)
        ));
        assert!(free_energy_pp(0.5, T, &t, &t, ModeFilter::POSITIVE, &o).is_ok());
    }
}
