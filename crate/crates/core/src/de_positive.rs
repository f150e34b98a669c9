//! Positive Matsubara modes in the derivative expansion.
//!
//! The sphere–sphere force and gradient from the `n > 0` terms are the PFA
//! values corrected to first order in `x = a/R̃`:
//!
//! * `F_{n>0} = 2πR̃ 𝓕_{n>0} [1 − (θ + uκ) x]`
//! * `F′_{n>0} = −2πR̃ F_{n>0}^pp [1 − (θ̃ + uκ̃) x]`
//!
//! θ, θ̃ are tabulated for gold at room temperature. κ, κ̃ follow from the
//! plane-parallel quantities as `κ = 1 + 𝓖/(a𝓕)` and `κ̃ = 1 − 2𝓕/(aF)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::geometry::SphereGeometry;
use crate::interp::MonotoneCubic;
use crate::lifshitz::{free_energy_pp, gee_pp, pressure_pp, LifshitzOptions, ModeFilter};
use crate::materials::PermittivityModel;

/// Which table set supplies θ, κ, θ̃, κ̃.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TablePrescription {
    Drude,
    Plasma,
}

/// Whether κ, κ̃ come from the tables or from the Lifshitz integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaSource {
    #[default]
    Table,
    Computed,
}

/// One row: `(a [µm], θ, κ, θ̃, κ̃)`.
pub type DeRow = (f64, f64, f64, f64, f64);

const DRUDE: [DeRow; 24] = [
    (0.10, 0.717, 0.440, 0.456, 0.245),
    (0.15, 0.694, 0.471, 0.4715, 0.270),
    (0.20, 0.664, 0.496, 0.470, 0.289),
    (0.25, 0.636, 0.515, 0.463, 0.305),
    (0.30, 0.609, 0.532, 0.454, 0.319),
    (0.35, 0.584, 0.546, 0.4445, 0.331),
    (0.40, 0.561, 0.559, 0.435, 0.342),
    (0.45, 0.540, 0.571, 0.425, 0.353),
    (0.50, 0.520, 0.583, 0.415, 0.362),
    (0.55, 0.502, 0.593, 0.4055, 0.371),
    (0.60, 0.484, 0.603, 0.396, 0.380),
    (0.65, 0.468, 0.613, 0.387, 0.389),
    (0.70, 0.453, 0.622, 0.379, 0.397),
    (0.75, 0.439, 0.630, 0.370, 0.405),
    (0.80, 0.425, 0.639, 0.362, 0.413),
    (0.85, 0.412, 0.647, 0.3545, 0.421),
    (0.90, 0.400, 0.655, 0.347, 0.429),
    (0.95, 0.389, 0.662, 0.3395, 0.437),
    (1.00, 0.378, 0.669, 0.332, 0.444),
    (1.20, 0.340, 0.696, 0.306, 0.474),
    (1.40, 0.307, 0.719, 0.282, 0.502),
    (1.60, 0.279, 0.739, 0.261, 0.529),
    (1.80, 0.256, 0.757, 0.242, 0.554),
    (2.00, 0.237, 0.774, 0.225, 0.578),
];

const PLASMA: [DeRow; 24] = [
    (0.10, 0.725, 0.440, 0.463, 0.244),
    (0.15, 0.700, 0.472, 0.477, 0.269),
    (0.20, 0.670, 0.496, 0.475, 0.289),
    (0.25, 0.639, 0.515, 0.467, 0.306),
    (0.30, 0.612, 0.532, 0.458, 0.319),
    (0.35, 0.586, 0.547, 0.447, 0.332),
    (0.40, 0.563, 0.560, 0.437, 0.343),
    (0.45, 0.541, 0.572, 0.427, 0.352),
    (0.50, 0.521, 0.583, 0.417, 0.363),
    (0.55, 0.503, 0.594, 0.407, 0.372),
    (0.60, 0.486, 0.604, 0.398, 0.380),
    (0.65, 0.469, 0.613, 0.389, 0.389),
    (0.70, 0.454, 0.622, 0.380, 0.397),
    (0.75, 0.440, 0.631, 0.371, 0.406),
    (0.80, 0.426, 0.639, 0.363, 0.413),
    (0.85, 0.413, 0.647, 0.355, 0.421),
    (0.90, 0.401, 0.655, 0.348, 0.430),
    (0.95, 0.389, 0.662, 0.340, 0.437),
    (1.00, 0.378, 0.670, 0.333, 0.444),
    (1.20, 0.339, 0.696, 0.306, 0.474),
    (1.40, 0.307, 0.712, 0.282, 0.502),
    (1.60, 0.279, 0.739, 0.261, 0.529),
    (1.80, 0.256, 0.758, 0.242, 0.554),
    (2.00, 0.236, 0.774, 0.225, 0.578),
];

/// Separation range covered by the tables (µm).
pub const TABLE_RANGE: (f64, f64) = (0.10, 2.0);

/// Embedded rows for one prescription, in increasing `a`.
pub fn table_rows(p: TablePrescription) -> &'static [DeRow; 24] {
    match p {
        TablePrescription::Drude => &DRUDE,
        TablePrescription::Plasma => &PLASMA,
    }
}

/// Coefficients of the first-order correction at one separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeCoefficients {
    pub theta: f64,
    pub kappa: f64,
    pub theta_tilde: f64,
    pub kappa_tilde: f64,
}

struct Curves([MonotoneCubic; 4]);

fn curves(p: TablePrescription) -> &'static Curves {
    static DR: OnceLock<Curves> = OnceLock::new();
    static PL: OnceLock<Curves> = OnceLock::new();
    let cell = match p {
        TablePrescription::Drude => &DR,
        TablePrescription::Plasma => &PL,
    };
    cell.get_or_init(|| {
        let rows = table_rows(p);
        let a: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let col = |f: fn(&DeRow) -> f64| {
            MonotoneCubic::new(a.clone(), rows.iter().map(f).collect())
                .expect("embedded table is well formed")
        };
        Curves([col(|r| r.1), col(|r| r.2), col(|r| r.3), col(|r| r.4)])
    })
}

fn range_error(a: f64) -> CasimirError {
    CasimirError::OutOfRange {
        quantity: "separation a (µm)",
        value: a,
        min: TABLE_RANGE.0,
        max: TABLE_RANGE.1,
    }
}

/// Tabulated coefficients at `a` (µm), interpolated between nodes.
pub fn table_lookup(a: f64, p: TablePrescription) -> Result<DeCoefficients> {
    let c = curves(p);
    let v = |i: usize| c.0[i].eval(a).ok_or_else(|| range_error(a));
    Ok(DeCoefficients {
        theta: v(0)?,
        kappa: v(1)?,
        theta_tilde: v(2)?,
        kappa_tilde: v(3)?,
    })
}

/// `(θ, θ̃)` at `a` (µm).
pub fn theta_lookup(a: f64, p: TablePrescription) -> Result<(f64, f64)> {
    let c = table_lookup(a, p)?;
    Ok((c.theta, c.theta_tilde))
}

/// Plane-parallel `n > 0` quantities needed by the expansion.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PositivePlanar {
    /// `𝓕_{n>0}` (eV/µm²).
    pub free_energy: f64,
    /// `F_{n>0}` (eV/µm³).
    pub pressure: f64,
}

pub fn positive_planar(
    a: f64,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    o: &LifshitzOptions,
) -> Result<PositivePlanar> {
    Ok(PositivePlanar {
        free_energy: free_energy_pp(a, t, m1, m2, ModeFilter::POSITIVE, o)?.value,
        pressure: pressure_pp(a, t, m1, m2, ModeFilter::POSITIVE, o)?.value,
    })
}

/// `(κ, κ̃)` from the Lifshitz integrals.
pub fn kappa_compute(
    a: f64,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    o: &LifshitzOptions,
) -> Result<(f64, f64)> {
    let pp = positive_planar(a, t, m1, m2, o)?;
    let g = gee_pp(a, t, m1, m2, o)?.value;
    Ok((
        1.0 + g / (a * pp.free_energy),
        1.0 - 2.0 * pp.free_energy / (a * pp.pressure),
    ))
}

/// `(β_{n>0}, β̃_{n>0}) = (−(θ + uκ), −(θ̃ + uκ̃))` from the tables.
pub fn beta_positive(a: f64, u: f64, p: TablePrescription) -> Result<(f64, f64)> {
    let c = table_lookup(a, p)?;
    Ok(betas(&c, u))
}

fn betas(c: &DeCoefficients, u: f64) -> (f64, f64) {
    (
        -(c.theta + u * c.kappa),
        -(c.theta_tilde + u * c.kappa_tilde),
    )
}

/// Force and gradient from the positive Matsubara modes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PositiveModes {
    /// `2πR̃𝓕_{n>0}` (eV/µm).
    pub force_pfa: f64,
    pub force: f64,
    /// `−2πR̃F_{n>0}` (eV/µm²).
    pub gradient_pfa: f64,
    pub gradient: f64,
    pub beta: f64,
    pub beta_tilde: f64,
    pub coefficients: DeCoefficients,
}

/// Positive-mode force and gradient for two spheres.
///
/// θ, θ̃ always come from the tables; κ, κ̃ per `kappa`.
pub fn positive_modes(
    geom: &SphereGeometry,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    p: TablePrescription,
    kappa: KappaSource,
    o: &LifshitzOptions,
) -> Result<PositiveModes> {
    let mut c = table_lookup(geom.a, p)?;
    let x = geom.x();
    if x > 0.1 {
        log::warn!("a/R̃ = {x:.3} is not small; the first-order expansion may be inaccurate");
    }
    let pp = positive_planar(geom.a, t, m1, m2, o)?;
    if kappa == KappaSource::Computed {
        let g = gee_pp(geom.a, t, m1, m2, o)?.value;
        c.kappa = 1.0 + g / (geom.a * pp.free_energy);
        c.kappa_tilde = 1.0 - 2.0 * pp.free_energy / (geom.a * pp.pressure);
    }
    let (beta, beta_tilde) = betas(&c, geom.u());
    let r = geom.r_eff();
    let force_pfa = 2.0 * PI * r * pp.free_energy;
    let gradient_pfa = -2.0 * PI * r * pp.pressure;
    Ok(PositiveModes {
        force_pfa,
        force: force_pfa * (1.0 + beta * x),
        gradient_pfa,
        gradient: gradient_pfa * (1.0 + beta_tilde * x),
        beta,
        beta_tilde,
        coefficients: c,
    })
}

/// Force `F_{n>0}` and its PFA part (eV/µm).
pub fn force_positive(
    geom: &SphereGeometry,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    p: TablePrescription,
    kappa: KappaSource,
    o: &LifshitzOptions,
) -> Result<(f64, f64)> {
    let r = positive_modes(geom, t, m1, m2, p, kappa, o)?;
    Ok((r.force, r.force_pfa))
}

/// Gradient `F′_{n>0}` and its PFA part (eV/µm²).
pub fn grad_positive(
    geom: &SphereGeometry,
    t: f64,
    m1: &PermittivityModel,
    m2: &PermittivityModel,
    p: TablePrescription,
    kappa: KappaSource,
    o: &LifshitzOptions,
) -> Result<(f64, f64)> {
    let r = positive_modes(geom, t, m1, m2, p, kappa, o)?;
    Ok((r.gradient, r.gradient_pfa))
}

/// Both tables as CSV: `prescription,a_um,theta,kappa,theta_tilde,kappa_tilde`.
pub fn tables_csv() -> String {
    let mut out = String::from("prescription,a_um,theta,kappa,theta_tilde,kappa_tilde\n");
    for (name, p) in [
        ("drude", TablePrescription::Drude),
        ("plasma", TablePrescription::Plasma),
    ] {
        for r in table_rows(p) {
            out.push_str(&format!("{name},{},{},{},{},{}\n", r.0, r.1, r.2, r.3, r.4));
        }
    }
    out
}
