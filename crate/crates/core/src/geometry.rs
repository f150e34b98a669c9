//! Two-sphere geometry and its bispherical parametrisation.

use serde::Serialize;

use crate::error::{CasimirError, Result};

/// Two spheres of radii `r1`, `r2` at surface-to-surface gap `a` (µm).
///
/// A sphere facing a plane is represented by `r2 = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereGeometry {
    pub r1: f64,
    pub r2: f64,
    pub a: f64,
}

impl SphereGeometry {
    pub fn new(r1: f64, r2: f64, a: f64) -> Result<Self> {
        if !(r1 > 0.0 && r1.is_finite()) || !(r2 > 0.0) || !(a > 0.0 && a.is_finite()) {
            return Err(CasimirError::InvalidArgument(format!(
                "radii and gap must be positive (got R1 = {r1}, R2 = {r2}, a = {a})"
            )));
        }
        Ok(Self { r1, r2, a })
    }

    pub fn sphere_plate(r: f64, a: f64) -> Result<Self> {
        Self::new(r, f64::INFINITY, a)
    }

    pub fn with_gap(&self, a: f64) -> Self {
        Self { a, ..*self }
    }

    pub fn is_sphere_plate(&self) -> bool {
        self.r2.is_infinite()
    }

    /// Effective radius `R̃ = R₁R₂/(R₁+R₂)`.
    pub fn r_eff(&self) -> f64 {
        if self.is_sphere_plate() {
            self.r1
        } else {
            self.r1 * self.r2 / (self.r1 + self.r2)
        }
    }

    /// `u = R̃²/(R₁R₂)`, zero for a sphere facing a plane.
    pub fn u(&self) -> f64 {
        if self.is_sphere_plate() {
            0.0
        } else {
            self.r1 * self.r2 / (self.r1 + self.r2).powi(2)
        }
    }

    /// `x = a/R̃`.
    pub fn x(&self) -> f64 {
        self.a / self.r_eff()
    }

    /// Centre-to-centre distance; infinite for a sphere facing a plane.
    pub fn centre_distance(&self) -> f64 {
        self.r1 + self.r2 + self.a
    }
}

/// `Z` written directly in terms of `x = a/R̃` and `u`.
pub fn z_from_x_u(x: f64, u: f64) -> f64 {
    let t = x + 0.5 * u * x * x;
    1.0 / (1.0 + t + (t * (2.0 + t)).sqrt())
}

/// Bispherical coordinates of the two sphere surfaces.
///
/// `mu_plus > 0` labels sphere 1 and `mu_minus ≤ 0` sphere 2 (zero for a plane).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BisphericalGeometry {
    pub b: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub z_plus: f64,
    pub z_minus: f64,
    pub z: f64,
    /// `t± = cosh|μ±| − 1`, kept for cancellation-free derivatives at small gaps.
    pub t_plus: f64,
    pub t_minus: f64,
}

/// First and second gap derivatives of a bispherical coordinate `|μ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuDerivatives {
    pub mu: f64,
    pub d1: f64,
    pub d2: f64,
}

/// `(t, dt/da, d²t/da²)` for `t = a(a + 2R_other)/(2 L R_self)`.
fn t_with_derivatives(r_self: f64, r_other: f64, a: f64) -> (f64, f64, f64) {
    if r_other.is_infinite() {
        return (a / r_self, 1.0 / r_self, 0.0);
    }
    let l = r_self + r_other + a;
    let f = a * (a + 2.0 * r_other);
    let g = 2.0 * l * r_self;
    let (f1, f2, g1) = (2.0 * a + 2.0 * r_other, 2.0, 2.0 * r_self);
    let t = f / g;
    let t1 = (f1 - g1 * t) / g;
    let t2 = (f2 - 2.0 * g1 * t1) / g;
    (t, t1, t2)
}

fn mu_from_t(t: f64) -> f64 {
    (t + (t * (2.0 + t)).sqrt()).ln_1p()
}

fn mu_derivatives(t: (f64, f64, f64)) -> MuDerivatives {
    let (t0, t1, t2) = t;
    if t0 == 0.0 {
        return MuDerivatives {
            mu: 0.0,
            d1: 0.0,
            d2: 0.0,
        };
    }
    let mu = mu_from_t(t0);
    let sinh = (t0 * (2.0 + t0)).sqrt();
    let cosh = 1.0 + t0;
    let d1 = t1 / sinh;
    let d2 = (t2 - cosh * d1 * d1) / sinh;
    MuDerivatives { mu, d1, d2 }
}

impl BisphericalGeometry {
    /// Maps two spheres to bispherical coordinates and verifies the mapping.
    pub fn from_spheres(geom: &SphereGeometry) -> Result<Self> {
        let (tp, _, _) = t_with_derivatives(geom.r1, geom.r2, geom.a);
        let tm = if geom.is_sphere_plate() {
            0.0
        } else {
            t_with_derivatives(geom.r2, geom.r1, geom.a).0
        };
        let mu_plus = mu_from_t(tp);
        let mu_minus = -mu_from_t(tm);
        let sinh_p = (tp * (2.0 + tp)).sqrt();
        let b = geom.r1 * sinh_p;
        let z_plus = (-mu_plus).exp();
        let z_minus = mu_minus.exp();
        let bg = Self {
            b,
            mu_plus,
            mu_minus,
            z_plus,
            z_minus,
            z: (-(mu_plus - mu_minus)).exp(),
            t_plus: tp,
            t_minus: tm,
        };
        bg.check(geom)?;
        Ok(bg)
    }

    fn check(&self, geom: &SphereGeometry) -> Result<()> {
        let rel = |x: f64, y: f64| ((x - y) / y).abs();
        let r1 = self.b / self.mu_plus.sinh();
        if rel(r1, geom.r1) > 1e-12 {
            return Err(CasimirError::Geometry(format!(
                "R1 reconstructed as {r1}, expected {}",
                geom.r1
            )));
        }
        if !geom.is_sphere_plate() {
            let r2 = self.b / self.mu_minus.sinh().abs();
            if rel(r2, geom.r2) > 1e-12 {
                return Err(CasimirError::Geometry(format!(
                    "R2 reconstructed as {r2}, expected {}",
                    geom.r2
                )));
            }
        }
        let zc = z_from_x_u(geom.x(), geom.u());
        if rel(self.z, zc) > 1e-12 {
            return Err(CasimirError::Geometry(format!(
                "Z = {} disagrees with closed form {zc}",
                self.z
            )));
        }
        if !(self.z > 0.0 && self.z < 1.0) {
            return Err(CasimirError::Geometry(format!(
                "Z = {} outside (0, 1)",
                self.z
            )));
        }
        Ok(())
    }

    /// Gap derivatives of `μ₊` and `|μ₋|`.
    pub fn mu_derivatives(geom: &SphereGeometry) -> (MuDerivatives, MuDerivatives) {
        let plus = mu_derivatives(t_with_derivatives(geom.r1, geom.r2, geom.a));
        let minus = if geom.is_sphere_plate() {
            MuDerivatives {
                mu: 0.0,
                d1: 0.0,
                d2: 0.0,
            }
        } else {
            mu_derivatives(t_with_derivatives(geom.r2, geom.r1, geom.a))
        };
        (plus, minus)
    }

    /// `(Z, dZ/da, d²Z/da²)`.
    pub fn z_derivatives(geom: &SphereGeometry) -> (f64, f64, f64) {
        let (p, m) = Self::mu_derivatives(geom);
        let z = (-(p.mu + m.mu)).exp();
        let s1 = p.d1 + m.d1;
        let s2 = p.d2 + m.d2;
        (z, -z * s1, z * (s1 * s1 - s2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn derived_quantities() {
        let g = SphereGeometry::new(40.0, 40.0, 0.4).unwrap();
        assert_eq!(g.r_eff(), 20.0);
        assert_eq!(g.u(), 0.25);
        assert!((g.x() - 0.02).abs() < 1e-16);
        assert_eq!(g.centre_distance(), 80.4);
        let p = SphereGeometry::sphere_plate(40.0, 0.4).unwrap();
        assert_eq!(p.u(), 0.0);
        assert_eq!(p.r_eff(), 40.0);
        assert!(SphereGeometry::new(-1.0, 1.0, 1.0).is_err());
        assert!(SphereGeometry::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn equal_spheres_are_symmetric() {
        let g = SphereGeometry::new(40.0, 40.0, 0.4).unwrap();
        let bg = BisphericalGeometry::from_spheres(&g).unwrap();
        assert!((bg.mu_plus + bg.mu_minus).abs() < 1e-14);
        assert!((bg.z_plus - bg.z.sqrt()).abs() < 1e-14);
        assert!((bg.z_minus - bg.z_plus).abs() < 1e-14);
        let zc = z_from_x_u(0.02, 0.25);
        assert!(((-(bg.mu_plus - bg.mu_minus)).exp() / zc - 1.0).abs() < 1e-12);
    }

    #[test]
    fn limits() {
        assert!((z_from_x_u(1e-14, 0.25) - 1.0).abs() < 1e-6);
        let p = SphereGeometry::sphere_plate(10.0, 0.3).unwrap();
        let bg = BisphericalGeometry::from_spheres(&p).unwrap();
        assert_eq!(bg.mu_minus, 0.0);
        assert_eq!(bg.z, bg.z_plus);
        let near_plate = SphereGeometry::new(10.0, 1e9, 0.3).unwrap();
        let bn = BisphericalGeometry::from_spheres(&near_plate).unwrap();
        assert!(bn.mu_minus.abs() < 1e-4);
        assert!((bn.z / bg.z - 1.0).abs() < 1e-8);
    }

    #[test]
    fn z_derivatives_match_finite_differences() {
        for g in [
            SphereGeometry::new(10.0, 25.0, 0.7).unwrap(),
            SphereGeometry::sphere_plate(10.0, 0.7).unwrap(),
        ] {
            let (_, z1, z2) = BisphericalGeometry::z_derivatives(&g);
            let h = 1e-4;
            let z = |a: f64| BisphericalGeometry::from_spheres(&g.with_gap(a)).unwrap().z;
            let fd1 = (z(g.a + h) - z(g.a - h)) / (2.0 * h);
            let fd2 = (z(g.a + h) - 2.0 * z(g.a) + z(g.a - h)) / (h * h);
            assert!((fd1 / z1 - 1.0).abs() < 1e-7);
            assert!((fd2 / z2 - 1.0).abs() < 1e-4);
        }
    }

    proptest! {
        #[test]
        fn mapping_is_consistent(r1 in 0.5f64..200.0, r2 in 0.5f64..200.0, a in 1e-3f64..50.0) {
            let g = SphereGeometry::new(r1, r2, a).unwrap();
            prop_assert!(g.u() > 0.0 && g.u() <= 0.25 + 1e-16);
            let bg = BisphericalGeometry::from_spheres(&g).unwrap();
            prop_assert!(bg.mu_plus > 0.0 && bg.mu_minus < 0.0);
        }
    }
}
