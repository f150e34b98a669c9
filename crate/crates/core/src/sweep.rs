//! Config-driven separation sweeps with CSV and JSON output.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::{
    deviation, DeviationOptions, DeviationResult, ModelSpec, PlasmaClassicalMode, Prescription,
};
use crate::bispherical::{BisphericalOptions, Boundary};
use crate::de_positive::KappaSource;
use crate::error::{CasimirError, Result};
use crate::geometry::SphereGeometry;
use crate::lifshitz::LifshitzOptions;
use crate::plasma::{Decimation, PlasmaFrequencies, PlasmaOptions};
use crate::units::{force_to_newton, gradient_to_newton_per_metre};

/// One value for both spheres or one per sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerSphere {
    Both(f64),
    Each([f64; 2]),
}

impl PerSphere {
    pub fn frequencies(self) -> PlasmaFrequencies {
        match self {
            PerSphere::Both(v) => PlasmaFrequencies::equal(v),
            PerSphere::Each([a, b]) => PlasmaFrequencies {
                sphere1: a,
                sphere2: b,
            },
        }
    }
}

/// A single gap or an explicit list of gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gaps {
    One(f64),
    List(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub start_um: f64,
    pub stop_um: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
}

impl SweepRange {
    pub fn gaps(&self) -> Result<Vec<f64>> {
        let (a, b, n) = (self.start_um, self.stop_um, self.points);
        if n == 0 || !(a > 0.0 && b > 0.0) {
            return Err(CasimirError::InvalidArgument(
                "sweep needs points ≥ 1 and positive bounds".into(),
            ));
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        let f = |k: usize| {
            let s = k as f64 / (n - 1) as f64;
            if self.log {
                (a.ln() + s * (b.ln() - a.ln())).exp()
            } else {
                a + s * (b - a)
            }
        };
        Ok((0..n).map(f).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecimationKeyword {
    Auto,
    Off,
}

/// `"auto"`, `"off"` or `{"p1": .., "p2": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecimationSetting {
    Keyword(DecimationKeyword),
    Blocks { p1: usize, p2: usize },
}

impl Default for DecimationSetting {
    fn default() -> Self {
        DecimationSetting::Keyword(DecimationKeyword::Auto)
    }
}

impl From<DecimationSetting> for Decimation {
    fn from(d: DecimationSetting) -> Self {
        match d {
            DecimationSetting::Keyword(DecimationKeyword::Auto) => Decimation::Auto,
            DecimationSetting::Keyword(DecimationKeyword::Off) => Decimation::Off,
            DecimationSetting::Blocks { p1, p2 } => Decimation::Blocks { p1, p2 },
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationOverrides {
    /// Bispherical multipole cutoff.
    pub l_max: Option<usize>,
    pub c_n: Option<f64>,
    pub c_m: Option<f64>,
    /// Strip half-width in units of `Δ₂`; `0` keeps the full matrix.
    pub strip_width: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance of the plane-parallel integrals and Matsubara sums.
    pub rel_tol: Option<f64>,
    /// Finite-difference step relative to the gap.
    pub fd_step: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub format: OutputFormat,
    /// Standard output when absent.
    pub path: Option<PathBuf>,
}

fn default_temperature() -> f64 {
    300.0
}
fn default_omega_p() -> PerSphere {
    PerSphere::Both(9.0)
}
fn default_gamma() -> f64 {
    0.035
}

/// Sweep configuration as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(rename = "R1_um")]
    pub r1_um: f64,
    /// `null` or absent for a plane.
    #[serde(rename = "R2_um", default)]
    pub r2_um: Option<f64>,
    #[serde(default)]
    pub gap_um: Option<Gaps>,
    #[serde(default)]
    pub sweep: Option<SweepRange>,
    #[serde(rename = "temperature_K", default = "default_temperature")]
    pub temperature_k: f64,
    pub prescription: Prescription,
    pub boundary: Boundary,
    #[serde(rename = "omega_p_eV", default = "default_omega_p")]
    pub omega_p_ev: PerSphere,
    #[serde(rename = "gamma_eV", default = "default_gamma")]
    pub gamma_ev: f64,
    #[serde(default)]
    pub kappa_source: KappaSource,
    #[serde(default)]
    pub plasma_classical: PlasmaClassicalMode,
    #[serde(default)]
    pub truncation: TruncationOverrides,
    #[serde(default)]
    pub decimation: DecimationSetting,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn model(&self) -> ModelSpec {
        ModelSpec {
            prescription: self.prescription,
            boundary: self.boundary,
            omega_p: self.omega_p_ev.frequencies(),
            gamma_ev: self.gamma_ev,
            temperature_k: self.temperature_k,
            kappa_source: self.kappa_source,
            plasma_classical: self.plasma_classical,
        }
    }

    pub fn options(&self) -> DeviationOptions {
        let mut lifshitz = LifshitzOptions::default();
        let mut plasma = PlasmaOptions {
            decimation: self.decimation.into(),
            ..Default::default()
        };
        if let Some(t) = self.tolerances.rel_tol {
            lifshitz.rel_tol = t;
        }
        if let Some(h) = self.tolerances.fd_step {
            plasma.fd_step = h;
        }
        let tr = &self.truncation;
        if let Some(c) = tr.c_n {
            plasma.c_n = c;
        }
        if let Some(c) = tr.c_m {
            plasma.c_m = c;
        }
        if let Some(w) = tr.strip_width {
            plasma.strip_width = (w > 0.0).then_some(w);
        }
        DeviationOptions {
            lifshitz,
            bispherical: BisphericalOptions { l_max: tr.l_max },
            plasma,
        }
    }

    /// Requested gaps in increasing order.
    pub fn gaps(&self) -> Result<Vec<f64>> {
        let mut g = match (&self.gap_um, &self.sweep) {
            (Some(Gaps::One(a)), None) => vec![*a],
            (Some(Gaps::List(v)), None) if !v.is_empty() => v.clone(),
            (None, Some(s)) => s.gaps()?,
            _ => {
                return Err(CasimirError::InvalidArgument(
                    "give exactly one of `gap_um` (number or non-empty list) and `sweep`".into(),
                ))
            }
        };
        g.sort_by(f64::total_cmp);
        Ok(g)
    }

    pub fn geometry(&self, a: f64) -> Result<SphereGeometry> {
        match self.r2_um {
            Some(r2) => SphereGeometry::new(self.r1_um, r2, a),
            None => SphereGeometry::sphere_plate(self.r1_um, a),
        }
    }
}

/// Result of one sweep point.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub a_um: f64,
    pub outcome: std::result::Result<DeviationResult, String>,
}

/// Evaluates every gap independently; failures are kept as error rows.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepPoint>> {
    let model = config.model();
    model.validate()?;
    let opts = config.options();
    let gaps = config.gaps()?;
    Ok(gaps
        .par_iter()
        .map(|&a| SweepPoint {
            a_um: a,
            outcome: config
                .geometry(a)
                .and_then(|g| deviation(&g, &model, &opts))
                .map_err(|e| e.to_string()),
        })
        .collect())
}

/// Output record in SI units; the field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub a_um: f64,
    #[serde(rename = "F_pfa_N")]
    pub f_pfa_n: Option<f64>,
    #[serde(rename = "F_N")]
    pub f_n: Option<f64>,
    pub beta: Option<f64>,
    #[serde(rename = "Fp_pfa_N_per_m")]
    pub fp_pfa: Option<f64>,
    #[serde(rename = "Fp_N_per_m")]
    pub fp: Option<f64>,
    pub beta_tilde: Option<f64>,
    pub w: Option<f64>,
    pub w_tilde: Option<f64>,
    #[serde(rename = "F_n0_N")]
    pub f_n0: Option<f64>,
    #[serde(rename = "F_npos_N")]
    pub f_npos: Option<f64>,
    pub beta_n0: Option<f64>,
    pub beta_npos: Option<f64>,
    pub beta_tilde_n0: Option<f64>,
    pub beta_tilde_npos: Option<f64>,
    pub error: String,
}

/// Column names of the CSV output.
pub const CSV_COLUMNS: [&str; 16] = [
    "a_um",
    "F_pfa_N",
    "F_N",
    "beta",
    "Fp_pfa_N_per_m",
    "Fp_N_per_m",
    "beta_tilde",
    "w",
    "w_tilde",
    "F_n0_N",
    "F_npos_N",
    "beta_n0",
    "beta_npos",
    "beta_tilde_n0",
    "beta_tilde_npos",
    "error",
];

impl From<&SweepPoint> for Record {
    fn from(p: &SweepPoint) -> Self {
        match &p.outcome {
            Ok(r) => Record {
                a_um: p.a_um,
                f_pfa_n: Some(force_to_newton(r.force_pfa)),
                f_n: Some(force_to_newton(r.force)),
                beta: Some(r.beta),
                fp_pfa: Some(gradient_to_newton_per_metre(r.gradient_pfa)),
                fp: Some(gradient_to_newton_per_metre(r.gradient)),
                beta_tilde: Some(r.beta_tilde),
                w: Some(r.w),
                w_tilde: Some(r.w_tilde),
                f_n0: Some(force_to_newton(r.force_n0)),
                f_npos: Some(force_to_newton(r.force_npos)),
                beta_n0: Some(r.beta_n0),
                beta_npos: Some(r.beta_npos),
                beta_tilde_n0: Some(r.beta_tilde_n0),
                beta_tilde_npos: Some(r.beta_tilde_npos),
                error: String::new(),
            },
            Err(e) => Record {
                a_um: p.a_um,
                f_pfa_n: None,
                f_n: None,
                beta: None,
                fp_pfa: None,
                fp: None,
                beta_tilde: None,
                w: None,
                w_tilde: None,
                f_n0: None,
                f_npos: None,
                beta_n0: None,
                beta_npos: None,
                beta_tilde_n0: None,
                beta_tilde_npos: None,
                error: e.clone(),
            },
        }
    }
}

pub fn to_csv(points: &[SweepPoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in points {
        w.serialize(Record::from(p))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CasimirError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| CasimirError::Internal(e.to_string()))
}

pub fn to_json(points: &[SweepPoint]) -> Result<String> {
    let records: Vec<Record> = points.iter().map(Record::from).collect();
    Ok(serde_json::to_string_pretty(&records)?)
}

pub fn render(points: &[SweepPoint], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => to_csv(points),
        OutputFormat::Json => to_json(points),
    }
}
