//! Dielectric response on the imaginary frequency axis, Fresnel coefficients
//! and Matsubara grids.
//!
//! Frequencies are passed as energies `ħξ` in eV and wave numbers in µm⁻¹.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::interp::MonotoneCubic;
use crate::units::{thermal_energy, HBAR_C};

/// How a material reflects at zero Matsubara frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroFrequencyRule {
    /// Ohmic conductor: TE does not reflect, TM reflects perfectly.
    Drude,
    /// Dissipationless plasma with plasma frequency `ħω_p` (eV).
    Plasma { omega_p_ev: f64 },
    /// Ideal metal: `(r_TE, r_TM) = (−1, +1)`.
    PerfectConductor,
}

/// Permittivity sampled on the imaginary axis, interpolated monotonically in
/// `(ln ξ, ln(ε − 1))`.
#[derive(Debug, Clone)]
pub struct TabulatedPermittivity {
    xi_ev: Vec<f64>,
    eps: Vec<f64>,
    curve: MonotoneCubic,
    zero_frequency: Option<ZeroFrequencyRule>,
}

impl TabulatedPermittivity {
    /// Builds a table from `(ħξ, ε)` rows. Rows are 1-based in error messages.
    pub fn new(rows: Vec<(f64, f64)>, zero_frequency: Option<ZeroFrequencyRule>) -> Result<Self> {
        let numbered: Vec<(usize, f64, f64)> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (x, e))| (i + 1, x, e))
            .collect();
        Self::from_numbered(numbered, zero_frequency)
    }

    fn from_numbered(
        rows: Vec<(usize, f64, f64)>,
        zero_frequency: Option<ZeroFrequencyRule>,
    ) -> Result<Self> {
        if rows.len() < 2 {
            return Err(CasimirError::Table {
                line: rows.last().map_or(0, |r| r.0),
                message: "at least two rows are required".into(),
            });
        }
        for (k, &(line, xi, eps)) in rows.iter().enumerate() {
            if !(xi > 0.0) || !xi.is_finite() {
                return Err(CasimirError::Table {
                    line,
                    message: format!("frequency {xi} must be positive"),
                });
            }
            if !(eps >= 1.0) || !eps.is_finite() {
                return Err(CasimirError::Table {
                    line,
                    message: format!("permittivity {eps} is below 1"),
                });
            }
            if k > 0 {
                let (_, xp, ep) = rows[k - 1];
                if !(xi > xp) {
                    return Err(CasimirError::Table {
                        line,
                        message: format!("frequency {xi} does not increase (previous row {xp})"),
                    });
                }
                if eps > ep {
                    return Err(CasimirError::Table {
                        line,
                        message: format!(
                            "permittivity {eps} increases with frequency (previous row {ep})"
                        ),
                    });
                }
            }
        }
        let xi_ev: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let eps: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let lx = xi_ev.iter().map(|x| x.ln()).collect();
        let ly = eps
            .iter()
            .map(|e| (e - 1.0).max(f64::MIN_POSITIVE).ln())
            .collect();
        let curve = MonotoneCubic::new(lx, ly)?;
        Ok(Self {
            xi_ev,
            eps,
            curve,
            zero_frequency,
        })
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xi_ev.iter().copied().zip(self.eps.iter().copied())
    }

    /// Frequency range covered by the table (eV).
    pub fn range(&self) -> (f64, f64) {
        (self.xi_ev[0], self.xi_ev[self.xi_ev.len() - 1])
    }

    pub fn with_zero_frequency(mut self, rule: Option<ZeroFrequencyRule>) -> Self {
        self.zero_frequency = rule;
        self
    }

    fn eval(&self, xi_ev: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        match self.curve.eval(xi_ev.ln()) {
            Some(v) => Ok(1.0 + v.exp()),
            None => Err(CasimirError::OutOfRange {
                quantity: "table frequency (eV)",
                value: xi_ev,
                min: lo,
                max: hi,
            }),
        }
    }
}

/// Conductor dielectric response on the imaginary axis.
#[derive(Debug, Clone)]
pub enum PermittivityModel {
    /// `ε = 1 + ω_p² / (ξ(ξ + γ))`.
    Drude {
        omega_p_ev: f64,
        gamma_ev: f64,
    },
    /// `ε = 1 + ω_p² / ξ²`.
    Plasma {
        omega_p_ev: f64,
    },
    PerfectConductor,
    Tabulated(TabulatedPermittivity),
}

/// Value of `ε(iξ)`; perfect conductors are reported as infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Response {
    Finite(f64),
    Infinite,
}

impl PermittivityModel {
    pub fn drude(omega_p_ev: f64, gamma_ev: f64) -> Result<Self> {
        if !(omega_p_ev > 0.0) || !(gamma_ev >= 0.0) {
            return Err(CasimirError::InvalidArgument(format!(
                "Drude parameters need ω_p > 0 and γ ≥ 0 (got {omega_p_ev}, {gamma_ev})"
            )));
        }
        Ok(Self::Drude {
            omega_p_ev,
            gamma_ev,
        })
    }

    pub fn plasma(omega_p_ev: f64) -> Result<Self> {
        if !(omega_p_ev > 0.0) {
            return Err(CasimirError::InvalidArgument(format!(
                "plasma frequency must be positive (got {omega_p_ev})"
            )));
        }
        Ok(Self::Plasma { omega_p_ev })
    }

    /// Gold as used throughout: `ħω_p = 9 eV`, `ħγ = 0.035 eV`.
    pub fn gold_drude() -> Self {
        Self::Drude {
            omega_p_ev: 9.0,
            gamma_ev: 0.035,
        }
    }

    pub fn gold_plasma() -> Self {
        Self::Plasma { omega_p_ev: 9.0 }
    }

    /// `ε(iξ)` at `ħξ = xi_ev > 0`.
    pub fn epsilon(&self, xi_ev: f64) -> Result<Response> {
        if !(xi_ev > 0.0) {
            return Err(CasimirError::InvalidArgument(format!(
                "permittivity is only evaluated at positive frequency (got {xi_ev})"
            )));
        }
        Ok(match self {
            Self::Drude {
                omega_p_ev,
                gamma_ev,
            } => Response::Finite(1.0 + omega_p_ev * omega_p_ev / (xi_ev * (xi_ev + gamma_ev))),
            Self::Plasma { omega_p_ev } => Response::Finite(1.0 + (omega_p_ev / xi_ev).powi(2)),
            Self::PerfectConductor => Response::Infinite,
            Self::Tabulated(t) => Response::Finite(t.eval(xi_ev)?),
        })
    }

    pub fn zero_frequency_rule(&self) -> Option<ZeroFrequencyRule> {
        match self {
            Self::Drude { .. } => Some(ZeroFrequencyRule::Drude),
            Self::Plasma { omega_p_ev } => Some(ZeroFrequencyRule::Plasma {
                omega_p_ev: *omega_p_ev,
            }),
            Self::PerfectConductor => Some(ZeroFrequencyRule::PerfectConductor),
            Self::Tabulated(t) => t.zero_frequency,
        }
    }
}

/// Fresnel coefficients `(r_TE, r_TM)` at `ħξ = xi_ev > 0` and in-plane wave number `k_perp` (µm⁻¹).
pub fn fresnel(eps: Response, xi_ev: f64, k_perp: f64) -> Result<(f64, f64)> {
    if !(xi_ev > 0.0) || !(k_perp >= 0.0) {
        return Err(CasimirError::InvalidArgument(format!(
            "fresnel needs ξ > 0 and k⊥ ≥ 0 (got {xi_ev}, {k_perp})"
        )));
    }
    let k0 = xi_ev / HBAR_C;
    let q = k0.hypot(k_perp);
    match eps {
        Response::Finite(e) if !(e >= 1.0) => {
            Err(CasimirError::InvalidArgument(format!("ε = {e} is below 1")))
        }
        _ => Ok(reflection(eps, k0, q)),
    }
}

/// Fresnel coefficients in terms of `k0 = ξ/c` and `q = √(k0² + k⊥²)`.
///
/// The differences `q − k` and `εq − k` are formed without cancellation.
pub(crate) fn reflection(eps: Response, k0: f64, q: f64) -> (f64, f64) {
    match eps {
        Response::Infinite => (-1.0, 1.0),
        Response::Finite(e) => {
            let d = (e - 1.0) * k0 * k0;
            let k = (q * q + d).sqrt();
            let te = -d / ((q + k) * (q + k));
            let tm = (e - 1.0) * ((e + 1.0) * q * q - k0 * k0) / ((e * q + k) * (e * q + k));
            (te, tm)
        }
    }
}

/// Zero-frequency `(r_TE, r_TM)` at in-plane wave number `k` (µm⁻¹).
pub fn zero_frequency_reflection(rule: ZeroFrequencyRule, k: f64) -> (f64, f64) {
    match rule {
        ZeroFrequencyRule::Drude => (0.0, 1.0),
        ZeroFrequencyRule::PerfectConductor => (-1.0, 1.0),
        ZeroFrequencyRule::Plasma { omega_p_ev } => {
            let kp = omega_p_ev / HBAR_C;
            let s = k.hypot(kp);
            (-kp * kp / ((k + s) * (k + s)), 1.0)
        }
    }
}

/// Reads a two-column `ħξ (eV)`, `ε` table. Lines starting with `#` and blank
/// lines are skipped; errors carry the 1-based line number.
pub fn load_permittivity_table(path: impl AsRef<Path>) -> Result<PermittivityModel> {
    let text = std::fs::read_to_string(path)?;
    parse_permittivity_table(&text)
}

pub fn parse_permittivity_table(text: &str) -> Result<PermittivityModel> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = body.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(CasimirError::Table {
                line,
                message: format!("expected two columns, found {}", cols.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| CasimirError::Table {
                line,
                message: format!("cannot parse {s:?}: {e}"),
            })
        };
        rows.push((line, parse(cols[0])?, parse(cols[1])?));
    }
    Ok(PermittivityModel::Tabulated(
        TabulatedPermittivity::from_numbered(rows, None)?,
    ))
}

/// Matsubara frequencies `ħξ_n = 2πn k_B T` for `n = 0..=n_max`.
#[derive(Debug, Clone, Serialize)]
pub struct MatsubaraGrid {
    pub temperature_k: f64,
    pub n_max: usize,
    /// `ħξ_n` in eV.
    pub xi_ev: Vec<f64>,
    /// `λ_T = ħc/(2π k_B T)` in µm.
    pub thermal_length_um: f64,
}

/// `ħξ_n` in eV.
pub fn matsubara_energy(temperature_k: f64, n: usize) -> f64 {
    2.0 * std::f64::consts::PI * n as f64 * thermal_energy(temperature_k)
}

/// Thermal wavelength `λ_T = ħc/(2π k_B T)` in µm.
pub fn thermal_length(temperature_k: f64) -> f64 {
    HBAR_C / (2.0 * std::f64::consts::PI * thermal_energy(temperature_k))
}

/// Grid long enough that `e^{−2 a_min ξ_n/c}` has fallen below `rel_tol` at `n_max`.
pub fn matsubara_grid(temperature_k: f64, a_min_um: f64, rel_tol: f64) -> Result<MatsubaraGrid> {
    if !(temperature_k > 0.0) || !(a_min_um > 0.0) {
        return Err(CasimirError::InvalidArgument(format!(
            "Matsubara grid needs T > 0 and a > 0 (got {temperature_k}, {a_min_um})"
        )));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(CasimirError::InvalidArgument(format!(
            "relative tolerance {rel_tol} not in (0, 1)"
        )));
    }
    let lambda = thermal_length(temperature_k);
    // ξ_n/c = n/λ_T; a few extra e-folds cover the polynomial prefactor
    let c = 0.5 * (rel_tol.recip().ln() + 5.0);
    let n_max = (c * lambda / a_min_um).ceil().max(1.0) as usize;
    let xi_ev = (0..=n_max)
        .map(|n| matsubara_energy(temperature_k, n))
        .collect();
    Ok(MatsubaraGrid {
        temperature_k,
        n_max,
        xi_ev,
        thermal_length_um: lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_forms() {
        let p = PermittivityModel::plasma(9.0).unwrap();
        assert_eq!(p.epsilon(9.0).unwrap(), Response::Finite(2.0));
        let d = PermittivityModel::drude(9.0, 0.0).unwrap();
        assert_eq!(d.epsilon(9.0).unwrap(), Response::Finite(2.0));
        let Response::Finite(e) = PermittivityModel::gold_drude().epsilon(0.1624).unwrap() else {
            panic!()
        };
        let expected = 1.0 + 81.0 / (0.1624 * 0.1974);
        assert!((e - expected).abs() < 1e-9 * expected);
        assert!((e - 2527.4).abs() < 0.5);
        assert!(p.epsilon(0.0).is_err());
        assert_eq!(
            PermittivityModel::PerfectConductor.epsilon(1.0).unwrap(),
            Response::Infinite
        );
    }

    #[test]
    fn fresnel_examples() {
        assert_eq!(
            fresnel(Response::Finite(1.0), 0.3, 2.0).unwrap(),
            (0.0, 0.0)
        );
        assert_eq!(fresnel(Response::Infinite, 0.3, 2.0).unwrap(), (-1.0, 1.0));
        let (te, tm) = fresnel(Response::Finite(4.0), HBAR_C, 0.0).unwrap();
        assert!((te + 1.0 / 3.0).abs() < 1e-15);
        assert!((tm - 1.0 / 3.0).abs() < 1e-15);
        // large ε approaches the ideal metal
        let (te, tm) = fresnel(Response::Finite(1e16), 0.2, 5.0).unwrap();
        assert!((te + 1.0).abs() < 1e-5 && (tm - 1.0).abs() < 1e-5);
    }

    #[test]
    fn plasma_zero_frequency_is_limit_of_fresnel() {
        let rule = ZeroFrequencyRule::Plasma { omega_p_ev: 9.0 };
        let k = 3.0;
        let (te0, tm0) = zero_frequency_reflection(rule, k);
        let xi = 1e-7;
        let eps = PermittivityModel::plasma(9.0).unwrap().epsilon(xi).unwrap();
        let (te, tm) = fresnel(eps, xi, k).unwrap();
        assert!((te - te0).abs() < 1e-9);
        assert!((tm - tm0).abs() < 1e-9);
    }

    #[test]
    fn matsubara_examples() {
        let g = matsubara_grid(300.0, 0.1, 1e-8).unwrap();
        assert!((g.xi_ev[1] - 0.162_43).abs() < 1e-4);
        assert!((crate::units::ev_to_rad_per_s(g.xi_ev[1]) - 2.468e14).abs() < 1e11);
        assert_eq!(g.xi_ev[0], 0.0);
        // two-figure value quoted for room temperature
        assert_eq!((g.thermal_length_um * 10.0).round() / 10.0, 1.2);
        let g600 = matsubara_grid(600.0, 0.1, 1e-8).unwrap();
        assert!((g600.thermal_length_um - 0.5 * g.thermal_length_um).abs() < 1e-15);
        let tail = (-2.0 * 0.1 * g.n_max as f64 / g.thermal_length_um).exp();
        assert!(tail < 1e-8);
        assert!(matsubara_grid(0.0, 0.1, 1e-8).is_err());
        assert!(matsubara_grid(300.0, -1.0, 1e-8).is_err());
    }

    #[test]
    fn table_parsing_and_validation() {
        let m = parse_permittivity_table("# xi eps\n0.1 3000\n\n0.2 900\n").unwrap();
        let Response::Finite(mid) = m.epsilon((0.1f64 * 0.2).sqrt()).unwrap() else {
            panic!()
        };
        assert!(mid < 3000.0 && mid > 900.0);
        let Response::Finite(node) = m.epsilon(0.1).unwrap() else {
            panic!()
        };
        assert!((node / 3000.0 - 1.0).abs() < 1e-14);
        assert!(m.epsilon(0.05).is_err());
        assert!(m.zero_frequency_rule().is_none());

        match parse_permittivity_table("0.2 900\n# c\n0.1 3000\n") {
            Err(CasimirError::Table { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_permittivity_table("0.1 3000\n0.2 0.5\n") {
            Err(CasimirError::Table { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_permittivity_table("0.1 3000\n0.2 x\n") {
            Err(CasimirError::Table { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn response_bounds(xi in 1e-4f64..50.0, k in 0.0f64..100.0, gamma in 0.0f64..1.0) {
            for model in [PermittivityModel::drude(9.0, gamma).unwrap(), PermittivityModel::plasma(9.0).unwrap()] {
                let Response::Finite(e) = model.epsilon(xi).unwrap() else { unreachable!() };
                let Response::Finite(e2) = model.epsilon(xi * 1.1).unwrap() else { unreachable!() };
                prop_assert!(e >= 1.0 && e2 <= e);
                let (te, tm) = fresnel(Response::Finite(e), xi, k).unwrap();
                prop_assert!((-1.0..=0.0).contains(&te));
                prop_assert!((0.0..=1.0).contains(&tm));
            }
        }

        #[test]
        fn drude_tends_to_plasma(xi in 1e-3f64..10.0) {
            let Response::Finite(d) = PermittivityModel::drude(9.0, 1e-12).unwrap().epsilon(xi).unwrap() else { unreachable!() };
            let Response::Finite(p) = PermittivityModel::plasma(9.0).unwrap().epsilon(xi).unwrap() else { unreachable!() };
            prop_assert!((d / p - 1.0).abs() < 1e-9);
        }
    }
}
