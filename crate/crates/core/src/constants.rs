//! Physical constants (SI) used to convert device geometry and temperature
//! into angular frequencies and occupations.

use std::f64::consts::PI;

/// Reduced Planck constant [J·s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant [J/K].
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permeability [N/A²].
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Bohr magneton [J/T].
pub const MU_B: f64 = 9.274_010_078_3e-24;

/// CODATA constants plus the NV ground-state parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant [J·s].
    pub hbar: f64,
    /// Boltzmann constant [J/K].
    pub k_b: f64,
    /// Vacuum permeability [N/A²].
    pub mu_0: f64,
    /// Bohr magneton [J/T].
    pub mu_b: f64,
    /// Landé factor of the NV electron spin (dimensionless).
    pub g_e: f64,
    /// NV zero-field splitting [rad/s].
    pub zero_field_splitting: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: HBAR,
            k_b: K_B,
            mu_0: MU_0,
            mu_b: MU_B,
            g_e: 2.0,
            zero_field_splitting: 2.0 * PI * 2.87e9,
        }
    }
}
