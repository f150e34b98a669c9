//! Closed-form limits of the Drude zero-frequency force.

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::geometry::SphereGeometry;
use crate::units::{thermal_energy, ZETA3};

use super::Boundary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `a/R̃ < 0.05`: PFA plus the first correction, the same for both boundaries.
    Near,
    /// `a > 10(R₁ + R₂)`: leading multipole interaction.
    Far,
}

/// Asymptotic zero-frequency Drude force (eV/µm).
pub fn asymptotic_drude(
    geom: &SphereGeometry,
    t: f64,
    boundary: Boundary,
    regime: Regime,
) -> Result<f64> {
    let kt = thermal_energy(t);
    let (r1, r2, a) = (geom.r1, geom.r2, geom.a);
    match regime {
        Regime::Near => {
            let x = geom.x();
            if x >= 0.05 {
                return Err(CasimirError::OutOfRange {
                    quantity: "a/R̃ (near regime)",
                    value: x,
                    min: 0.0,
                    max: 0.05,
                });
            }
            Ok(-kt * ZETA3 * geom.r_eff() / (8.0 * a * a) * (1.0 + x / (6.0 * ZETA3)))
        }
        Regime::Far => {
            if geom.is_sphere_plate() || a <= 10.0 * (r1 + r2) {
                return Err(CasimirError::OutOfRange {
                    quantity: "a/(R1 + R2) (far regime)",
                    value: a / (r1 + r2),
                    min: 10.0,
                    max: f64::INFINITY,
                });
            }
            Ok(match boundary {
                Boundary::Grounded => -kt * r1 * r2 / a.powi(3),
                Boundary::Isolated => -18.0 * kt * (r1 * r2).powi(3) / a.powi(7),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes_are_enforced() {
        let g = SphereGeometry::new(1.0, 1.0, 0.1).unwrap();
        assert!(asymptotic_drude(&g, 300.0, Boundary::Grounded, Regime::Far).is_err());
        let far = SphereGeometry::new(1.0, 1.0, 100.0).unwrap();
        assert!(asymptotic_drude(&far, 300.0, Boundary::Grounded, Regime::Near).is_err());
        let f = asymptotic_drude(&far, 300.0, Boundary::Grounded, Regime::Far).unwrap();
        assert!((f / (-thermal_energy(300.0) * 1e-6) - 1.0).abs() < 1e-14);
        let fi = asymptotic_drude(&far, 300.0, Boundary::Isolated, Regime::Far).unwrap();
        assert!((fi / f - 18.0 * 1e-8).abs() < 1e-20);
        assert!((1.0 / (6.0 * ZETA3) - 0.13865).abs() < 1e-5);
    }
}
