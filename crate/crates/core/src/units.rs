//! Physical constants and unit conversions.
//!
//! Internally energies and rates are in eV, times in fs, dipoles in Debye and
//! field amplitudes in atomic units. Conversion to SI happens only at the
//! light-matter coupling (`-μE`) and when producing absorption cross sections.
//!
//! Values are CODATA 2018 (exact SI definitions where applicable):
//! - ħ = 6.582119569e-16 eV·s
//! - 1 D = 1e-21 / c C·m
//! - atomic unit of electric field = 5.14220674763e11 V/m
//! - ε₀ = 8.8541878128e-12 F/m
//! - e = 1.602176634e-19 C (exact)

use serde::Serialize;

/// Reduced Planck constant in eV·fs.
pub const HBAR_EV_FS: f64 = 0.6582119569;
/// Speed of light in m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity in F/m.
pub const EPSILON_0: f64 = 8.8541878128e-12;
/// Elementary charge in C, also J per eV.
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
/// One Debye in C·m.
pub const DEBYE_TO_CM: f64 = 1.0e-21 / SPEED_OF_LIGHT;
/// Atomic unit of electric field in V/m.
pub const AU_FIELD_TO_VPM: f64 = 5.142_206_747_63e11;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// eV·fs
    pub hbar: f64,
    pub debye_to_cm: f64,
    pub au_field_to_vpm: f64,
    pub eps0: f64,
    pub c: f64,
    /// Energy in eV of one Debye in a field of one atomic unit.
    pub debye_au_to_ev: f64,
}

impl PhysicalConstants {
    pub const fn codata2018() -> Self {
        PhysicalConstants {
            hbar: HBAR_EV_FS,
            debye_to_cm: DEBYE_TO_CM,
            au_field_to_vpm: AU_FIELD_TO_VPM,
            eps0: EPSILON_0,
            c: SPEED_OF_LIGHT,
            debye_au_to_ev: DEBYE_TO_CM * AU_FIELD_TO_VPM / ELEMENTARY_CHARGE,
        }
    }

    /// Angular frequency in rad/s for a photon energy in eV.
    pub fn ev_to_rad_per_s(&self, energy_ev: f64) -> f64 {
        energy_ev / (self.hbar * 1.0e-15)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

/// Shared instance used throughout the crate.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants::codata2018();
