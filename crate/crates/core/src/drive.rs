//! Classical driving field: a Gaussian pulse on a cosine carrier, or a
//! continuous wave when the envelope is switched off.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::ParameterSet;
use crate::units::HBAR_EV_FS;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    /// Peak field amplitude, atomic units.
    pub e_l: f64,
    /// Carrier photon energy, eV.
    pub omega_l: f64,
    /// Pulse center, fs.
    pub t_c: f64,
    /// Pulse width, fs.
    pub tau_l: f64,
    pub cw_mode: bool,
}

impl DriveSpec {
    /// No field at all.
    pub const OFF: DriveSpec = DriveSpec { e_l: 0.0, omega_l: 0.0, t_c: 0.0, tau_l: 1.0, cw_mode: false };

    pub fn from_params(params: &ParameterSet) -> Self {
        DriveSpec {
            e_l: params.e_l,
            omega_l: params.omega_l,
            t_c: params.t_c,
            tau_l: params.tau_l,
            cw_mode: params.cw_mode,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_l >= 0.0) || !self.e_l.is_finite() {
            return invalid(format!("field amplitude must be >= 0, got {}", self.e_l));
        }
        if !self.cw_mode && !(self.tau_l > 0.0) {
            return invalid(format!("pulse width must be > 0 for a pulsed drive, got {}", self.tau_l));
        }
        Ok(())
    }

    pub fn is_off(&self) -> bool {
        self.e_l == 0.0
    }

    pub fn envelope(&self, t: f64) -> f64 {
        if self.cw_mode {
            1.0
        } else {
            let x = (t - self.t_c) / self.tau_l;
            (-x * x).exp()
        }
    }

    /// Field in atomic units at time `t` (fs).
    pub fn field_at(&self, t: f64) -> f64 {
        if self.e_l == 0.0 {
            return 0.0;
        }
        self.e_l * self.envelope(t) * (self.omega_l * t / HBAR_EV_FS).cos()
    }
}

pub fn field_at(drive: &DriveSpec, t: f64) -> f64 {
    drive.field_at(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulse() -> DriveSpec {
        DriveSpec { e_l: 1.38e-7, omega_l: 2.042, t_c: 50.0, tau_l: 10.0, cw_mode: false }
    }

    #[test]
    fn field_at_pulse_center() {
        let d = pulse();
        let expected = d.e_l * (d.omega_l * d.t_c / HBAR_EV_FS).cos();
        assert_eq!(d.field_at(d.t_c), expected);
    }

    #[test]
    fn gaussian_tail_is_off() {
        let d = pulse();
        assert!(d.envelope(d.t_c + 5.0 * d.tau_l) < 1.4e-11);
        assert!(d.envelope(d.t_c - 5.0 * d.tau_l) < 1.4e-11);
    }

    #[test]
    fn cw_envelope_is_unity() {
        let d = DriveSpec { cw_mode: true, ..pulse() };
        for t in [0.0, 13.7, 50.0, 1200.0, 2500.0] {
            assert_eq!(d.envelope(t), 1.0);
            let carrier = (d.omega_l * t / HBAR_EV_FS).cos();
            assert_eq!(d.field_at(t), d.e_l * carrier);
        }
    }

    #[test]
    fn validation() {
        assert!(pulse().validate().is_ok());
        assert!(DriveSpec { tau_l: 0.0, ..pulse() }.validate().is_err());
        assert!(DriveSpec { tau_l: 0.0, cw_mode: true, ..pulse() }.validate().is_ok());
        assert!(DriveSpec { e_l: -1.0, ..pulse() }.validate().is_err());
    }
}
