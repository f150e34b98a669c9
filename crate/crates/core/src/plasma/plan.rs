//! Multipole truncation, strip widths and decimation blocks.

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::geometry::SphereGeometry;

/// How the plasma TE matrix is coarsened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decimation {
    /// Enabled when `N₁ > 400`, with `p_i = clamp(⌊Δ_i/8⌋, 1, 10)`.
    #[default]
    Auto,
    Off,
    Blocks {
        p1: usize,
        p2: usize,
    },
}

/// Settings for the spherical-multipole plasma TE computation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct PlasmaOptions {
    /// `N_i = ⌈c_n R_i/a⌉`.
    pub c_n: f64,
    /// `m_max = ⌈√(c_m R̃/a)⌉`.
    pub c_m: f64,
    /// Strip half-width in units of `Δ₂`; `None` keeps the full matrix.
    pub strip_width: Option<f64>,
    pub decimation: Decimation,
    /// Relative finite-difference step for forces.
    pub fd_step: f64,
}

impl Default for PlasmaOptions {
    fn default() -> Self {
        Self {
            c_n: 6.0,
            c_m: 6.0,
            strip_width: Some(6.0),
            decimation: Decimation::Auto,
            fd_step: 1e-3,
        }
    }
}

/// Truncation fixed at one gap and reused for all shifted gaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationPlan {
    /// Multipoles per sphere (padded to multiples of the block sizes).
    pub n1: usize,
    pub n2: usize,
    pub m_max: usize,
    /// `Δ_i = R_i/√(R̃a)`.
    pub delta1: f64,
    pub delta2: f64,
    /// Strip half-width in columns; `None` for a full matrix.
    pub half_width: Option<f64>,
    pub p1: usize,
    pub p2: usize,
}

fn pad(n: usize, p: usize) -> usize {
    n.div_ceil(p) * p
}

impl TruncationPlan {
    pub fn new(geom: &SphereGeometry, opts: &PlasmaOptions) -> Result<Self> {
        if geom.is_sphere_plate() {
            return Err(CasimirError::InvalidArgument(
                "the spherical-multipole plasma TE term needs two finite spheres".into(),
            ));
        }
        if !(opts.c_n > 0.0 && opts.c_m > 0.0) {
            return Err(CasimirError::InvalidArgument(
                "truncation constants must be positive".into(),
            ));
        }
        let (r1, r2, a) = (geom.r1, geom.r2, geom.a);
        let rt = geom.r_eff();
        let n1 = (opts.c_n * r1 / a).ceil().max(1.0) as usize;
        let n2 = (opts.c_n * r2 / a).ceil().max(1.0) as usize;
        let m_max = (opts.c_m * rt / a).sqrt().ceil() as usize;
        let delta1 = r1 / (rt * a).sqrt();
        let delta2 = r2 / (rt * a).sqrt();
        let (p1, p2) = match opts.decimation {
            Decimation::Off => (1, 1),
            Decimation::Blocks { p1, p2 } => {
                if p1 == 0 || p2 == 0 {
                    return Err(CasimirError::InvalidArgument(
                        "decimation blocks must be at least 1".into(),
                    ));
                }
                (p1, p2)
            }
            Decimation::Auto if n1 > 400 => {
                let p = |d: f64| ((d / 8.0).floor() as usize).clamp(1, 10);
                (p(delta1), p(delta2))
            }
            Decimation::Auto => (1, 1),
        };
        if let Some(c) = opts.strip_width {
            if !(c > 0.0) {
                return Err(CasimirError::InvalidArgument(
                    "strip width must be positive".into(),
                ));
            }
        }
        Ok(Self {
            n1: pad(n1, p1),
            n2: pad(n2, p2),
            m_max,
            delta1,
            delta2,
            half_width: opts.strip_width.map(|c| c * delta2),
            p1,
            p2,
        })
    }

    pub fn is_decimated(&self) -> bool {
        self.p1 > 1 || self.p2 > 1
    }

    /// Same plan with block sizes halved (rounded down, at least 1) and the
    /// multipole counts re-padded.
    pub fn halved_blocks(&self) -> Self {
        let p1 = (self.p1 / 2).max(1);
        let p2 = (self.p2 / 2).max(1);
        Self {
            n1: pad(self.n1, p1),
            n2: pad(self.n2, p2),
            p1,
            p2,
            ..*self
        }
    }

    /// Decimated dimensions `(n₁/p₁, n₂/p₂)`.
    pub fn reduced_dims(&self) -> (usize, usize) {
        (self.n1 / self.p1, self.n2 / self.p2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_counts() {
        let g = SphereGeometry::new(10.0, 10.0, 0.1).unwrap();
        let p = TruncationPlan::new(&g, &PlasmaOptions::default()).unwrap();
        assert_eq!((p.n1, p.n2, p.m_max), (600, 600, 18));
        assert_eq!((p.p1, p.p2), (1, 1));
        let g = SphereGeometry::new(50.0, 50.0, 0.1).unwrap();
        let o = PlasmaOptions {
            decimation: Decimation::Blocks { p1: 7, p2: 7 },
            ..Default::default()
        };
        let p = TruncationPlan::new(&g, &o).unwrap();
        assert_eq!((p.n1, p.reduced_dims().0), (3003, 429));
        let h = p.halved_blocks();
        assert_eq!((h.p1, h.n1 % 3), (3, 0));
        let auto = TruncationPlan::new(&g, &PlasmaOptions::default()).unwrap();
        assert_eq!(auto.p1, 3);
        assert!(auto.n1.is_multiple_of(3) && auto.n1 >= 3000);
    }
}
