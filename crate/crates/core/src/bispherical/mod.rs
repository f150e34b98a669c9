//! Zero-frequency (classical) interaction in bispherical coordinates.
//!
//! Both sphere surfaces are coordinate surfaces `μ = μ±`, which makes the
//! Dirichlet problem diagonal and reduces the isolated-conductor and Neumann
//! problems to small dense or tridiagonal systems whose size grows only like
//! `√(R̃/a)`.

mod asymptotic;
mod dirichlet;
mod isolated;
mod neumann;

pub use asymptotic::{asymptotic_drude, Regime};
pub use dirichlet::{dirichlet_classical, dirichlet_energy};
pub use isolated::{
    drude_isolated_classical, drude_isolated_energy, isolated_m0_matrix, sphere_plate_drude_exact,
};
pub use neumann::{neumann_classical, neumann_classical_fd, neumann_energy, neumann_t_matrix};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{BisphericalGeometry, SphereGeometry};

/// Electrical state of the conductors, which fixes the TM zero mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Connected to a charge reservoir: Dirichlet condition.
    Grounded,
    /// Fixed total charge: the monopole is removed.
    Isolated,
}

/// Energy (eV), force (eV/µm) and gradient (eV/µm²) of a zero-frequency term.
///
/// The force is `−∂E/∂a` and the gradient `∂F/∂a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalResult {
    pub energy: f64,
    pub force: f64,
    pub gradient: f64,
    pub l_max: usize,
    pub m_max: usize,
    pub converged: bool,
}

impl ClassicalResult {
    pub fn sum(&self, other: &Self) -> Self {
        Self {
            energy: self.energy + other.energy,
            force: self.force + other.force,
            gradient: self.gradient + other.gradient,
            l_max: self.l_max.max(other.l_max),
            m_max: self.m_max.max(other.m_max),
            converged: self.converged && other.converged,
        }
    }
}

/// Truncation for the bispherical multipole sums.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct BisphericalOptions {
    /// Fixed largest multipole; adaptive when `None`.
    pub l_max: Option<usize>,
}

/// Smallest `l` with `Z^{2l} < 10⁻¹⁶`, plus a margin of eight.
pub fn adaptive_l_max(z: f64) -> usize {
    let l = (1e-16f64.ln() / (2.0 * z.ln())).ceil();
    (l.max(1.0) as usize) + 8
}

pub(crate) fn l_max_for(geom: &SphereGeometry, opts: &BisphericalOptions) -> Result<usize> {
    match opts.l_max {
        Some(l) => Ok(l.max(1)),
        None => Ok(adaptive_l_max(BisphericalGeometry::from_spheres(geom)?.z)),
    }
}

/// TM and TE parts of a perfect-conductor zero-frequency term.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PcClassical {
    pub total: ClassicalResult,
    pub tm: ClassicalResult,
    pub te: ClassicalResult,
}

/// Perfect conductor: TM as Dirichlet (grounded) or isolated Drude, TE as Neumann.
pub fn pc_classical(
    geom: &SphereGeometry,
    t: f64,
    boundary: Boundary,
    opts: &BisphericalOptions,
) -> Result<PcClassical> {
    let tm = tm_classical(geom, t, boundary, opts)?;
    let te = neumann_classical(geom, t, opts)?;
    Ok(PcClassical {
        total: tm.sum(&te),
        tm,
        te,
    })
}

/// TM zero mode shared by every metallic prescription.
pub fn tm_classical(
    geom: &SphereGeometry,
    t: f64,
    boundary: Boundary,
    opts: &BisphericalOptions,
) -> Result<ClassicalResult> {
    match boundary {
        Boundary::Grounded => dirichlet_classical(geom, t),
        Boundary::Isolated => drude_isolated_classical(geom, t, opts),
    }
}
