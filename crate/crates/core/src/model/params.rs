use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Physical parameters of the dot/plasmon system and its drive.
///
/// Energies and rates are ħ-scaled and given in eV, dipoles in Debye, the
/// field amplitude in atomic units and times in fs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterSet {
    pub omega0: f64,
    pub omega_pl: f64,
    pub omega_l: f64,
    /// One coupling per dot.
    pub g: Vec<f64>,
    pub gamma1: f64,
    pub gamma2_star: f64,
    pub gamma_pl: f64,
    pub d0: f64,
    pub d_pl: f64,
    pub e_l: f64,
    pub t_c: f64,
    pub tau_l: f64,
    pub n_med: f64,
    pub cw_mode: bool,
}

impl ParameterSet {
    /// Gold nanoparticle dimer with a CdSe dot, used for the optical spectra.
    pub fn optical_spectra(n_dots: usize) -> Self {
        ParameterSet {
            omega0: 2.042,
            omega_pl: 2.042,
            omega_l: 2.042,
            g: vec![0.0108; n_dots],
            gamma1: 268e-9,
            gamma2_star: 0.00127,
            gamma_pl: 0.150,
            d0: 13.9,
            d_pl: 2990.0,
            e_l: 1.38e-7,
            t_c: 50.0,
            tau_l: 10.0,
            n_med: 1.5,
            cw_mode: false,
        }
    }

    /// Gap-plasmon structure used for the coherence and entanglement runs.
    ///
    /// Only frequencies, couplings and rates are specific to this set; the
    /// plasmon loss slot holds the gap-plasmon decay rate (0.033 eV). Dipoles
    /// and pulse shape are carried over from [`Self::optical_spectra`] and the
    /// field is off.
    pub fn coherence(n_dots: usize) -> Self {
        ParameterSet {
            omega0: 1.44,
            omega_pl: 1.44,
            omega_l: 1.44,
            g: vec![0.0167; n_dots],
            gamma1: 666e-9,
            gamma2_star: 0.0017,
            gamma_pl: 0.033,
            e_l: 0.0,
            ..Self::optical_spectra(n_dots)
        }
    }

    /// Table set by number (1 or 2).
    pub fn table(set: u8, n_dots: usize) -> Result<Self> {
        match set {
            1 => Ok(Self::optical_spectra(n_dots)),
            2 => Ok(Self::coherence(n_dots)),
            other => invalid(format!("parameter set must be 1 or 2, got {other}")),
        }
    }

    pub fn n_dots(&self) -> usize {
        self.g.len()
    }

    /// Total dot amplitude-loss rate Γ = 2γ₂* + γ₁ (eV).
    pub fn big_gamma(&self) -> f64 {
        2.0 * self.gamma2_star + self.gamma1
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("omega0", self.omega0),
            ("omega_pl", self.omega_pl),
            ("omega_l", self.omega_l),
            ("gamma1", self.gamma1),
            ("gamma2_star", self.gamma2_star),
            ("gamma_pl", self.gamma_pl),
            ("d0", self.d0),
            ("d_pl", self.d_pl),
            ("e_l", self.e_l),
            ("tau_l", self.tau_l),
        ];
        for (name, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return invalid(format!("{name} must be finite and >= 0, got {v}"));
            }
        }
        if !self.t_c.is_finite() {
            return invalid("t_c must be finite");
        }
        if !(self.n_med >= 1.0) || !self.n_med.is_finite() {
            return invalid(format!("n_med must be >= 1, got {}", self.n_med));
        }
        if self.g.is_empty() {
            return invalid("coupling list must contain one entry per dot");
        }
        if let Some(bad) = self.g.iter().find(|g| !g.is_finite()) {
            return invalid(format!("coupling must be finite, got {bad}"));
        }
        Ok(())
    }
}
