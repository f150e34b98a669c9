//! Physical constants and unit conversions.
//!
//! Internally every length is in micrometres and every energy in electronvolts.
//! Frequencies are carried as energies `ħξ` (eV), so `ξ/c = ħξ / ħc` is an
//! inverse length in µm⁻¹.

/// ħc in eV·µm.
pub const HBAR_C: f64 = 0.197_326_980_4;

/// Boltzmann constant in eV/K.
pub const K_B: f64 = 8.617_333_262e-5;

/// ħ in eV·s.
pub const HBAR: f64 = 6.582_119_569e-16;

/// Elementary charge in coulomb (1 eV in joule).
pub const EV_IN_J: f64 = 1.602_176_634e-19;

/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_2;

/// eV/µm expressed in newton.
pub const EV_PER_UM_IN_N: f64 = EV_IN_J * 1e6;

/// eV/µm² expressed in N/m.
pub const EV_PER_UM2_IN_N_PER_M: f64 = EV_IN_J * 1e12;

/// eV/µm² expressed in J/m².
pub const EV_PER_UM2_IN_J_PER_M2: f64 = EV_IN_J * 1e12;

/// eV/µm³ expressed in Pa.
pub const EV_PER_UM3_IN_PA: f64 = EV_IN_J * 1e18;

/// Thermal energy k_B T in eV.
pub fn thermal_energy(temperature_k: f64) -> f64 {
    K_B * temperature_k
}

/// Angular frequency (rad/s) corresponding to an energy ħξ in eV.
pub fn ev_to_rad_per_s(energy_ev: f64) -> f64 {
    energy_ev / HBAR
}

pub fn force_to_newton(force_ev_per_um: f64) -> f64 {
    force_ev_per_um * EV_PER_UM_IN_N
}

pub fn gradient_to_newton_per_metre(grad_ev_per_um2: f64) -> f64 {
    grad_ev_per_um2 * EV_PER_UM2_IN_N_PER_M
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn room_temperature_thermal_energy() {
        assert!((thermal_energy(300.0) - 0.025_851_99).abs() < 1e-8);
    }

    #[test]
    fn force_conversion() {
        assert!((force_to_newton(1.0) - 1.602_176_634e-13).abs() < 1e-25);
        assert!((gradient_to_newton_per_metre(1.0) - 1.602_176_634e-7).abs() < 1e-19);
        assert!((EV_PER_UM3_IN_PA - 0.160_217_663_4).abs() < 1e-12);
    }
}
