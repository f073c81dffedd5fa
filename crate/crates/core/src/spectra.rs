//! Linear absorption spectra from a pulsed drive.
//!
//! The system starts in its ground state, is kicked by a short Gaussian pulse
//! and `⟨μ(t)⟩` is recorded until it has rung down. The polarizability is the
//! ratio of the Fourier transforms of the dipole and of the field,
//! `α(ω) = ∫⟨μ⟩e^{iωt/ħ}dt / (√n ∫E e^{iωt/ħ}dt)`, and the cross section is
//! `σ(ω) = n ω Im α / (ε₀ c)`.
//!
//! Both transforms are plain Riemann sums on the shared uniform grid,
//! evaluated directly at every requested ω. That is the zero-padded DFT
//! sampled at those frequencies, so the ω spacing is free of the record
//! length. The sample spacing cancels in the ratio.

use std::io::{self, Write};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::drive::{field_at, DriveSpec};
use crate::dynamics::{
    fmt_sig, propagate_lindblad, propagate_nonhermitian, DensityMatrix, PropagationSpec, RecordSpec, SolverKind,
    Trajectory, WavePacket,
};
use crate::error::{invalid, Error, Result};
use crate::model::{convert_cross_section, Basis, ParameterSet};
use crate::units::HBAR_EV_FS;

/// `⟨μ⟩` at the end of the record must be below this fraction of its peak.
pub const DECAY_FLOOR: f64 = 1e-6;
/// Frequencies where |∫E e^{iωt}| falls below this fraction of its peak are masked.
pub const MASK_FLOOR: f64 = 1e-12;
/// Length of the trailing stretch checked against [`DECAY_FLOOR`], fs.
pub const TAIL_WINDOW_FS: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_step: f64,
}

impl FrequencyGrid {
    /// 1.85–2.25 eV at 0.1 meV, around the 2.042 eV resonance.
    pub const DEFAULT: FrequencyGrid = FrequencyGrid { omega_min: 1.85, omega_max: 2.25, omega_step: 1e-4 };

    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.omega_step > 0.0) || !(self.omega_max > self.omega_min) || !(self.omega_min > 0.0) {
            return invalid(format!("bad frequency grid {self:?}"));
        }
        let n = ((self.omega_max - self.omega_min) / self.omega_step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|k| self.omega_min + k as f64 * self.omega_step).collect())
    }
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Clone, Debug)]
pub struct Polarizability {
    /// Debye per atomic unit of field.
    pub alpha: Vec<C64>,
    pub masked: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub alpha: Vec<C64>,
    /// Cross section, cm².
    pub sigma: Vec<f64>,
    pub masked: Vec<bool>,
}

/// Σ_k x_k e^{iω t_k/ħ}·Δt, with the phase advanced by recurrence and
/// re-anchored every 512 samples.
fn fourier(x: &[f64], times: &[f64], omega: f64) -> C64 {
    let dt = times[1] - times[0];
    let step = C64::from_polar(1.0, omega * dt / HBAR_EV_FS);
    let mut acc = C64::new(0.0, 0.0);
    let mut phase = C64::new(1.0, 0.0);
    for (k, (&v, &t)) in x.iter().zip(times).enumerate() {
        if k % 512 == 0 {
            phase = C64::from_polar(1.0, omega * t / HBAR_EV_FS);
        }
        acc += phase * v;
        phase *= step;
    }
    acc * dt
}

fn check_uniform(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return invalid("need at least two time samples");
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return invalid("time grid must be strictly increasing");
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1.0) {
            return invalid("time grid must be uniform");
        }
    }
    Ok(())
}

/// Complex polarizability from recorded dipole and field series.
pub fn polarizability(mu: &[f64], field: &[f64], times: &[f64], omega: &[f64], n_med: f64) -> Result<Polarizability> {
    check_uniform(times)?;
    if mu.len() != times.len() || field.len() != times.len() {
        return invalid("dipole, field and time series differ in length");
    }
    let dt = times[1] - times[0];
    let peak = mu.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tail_len = ((TAIL_WINDOW_FS / dt).round() as usize).clamp(1, mu.len());
    let tail = mu[mu.len() - tail_len..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if tail > DECAY_FLOOR * peak {
        return Err(Error::InsufficientPropagation { tail, peak, floor: DECAY_FLOOR });
    }

    let pairs: Vec<(C64, C64)> =
        omega.par_iter().map(|&w| (fourier(mu, times, w), fourier(field, times, w))).collect();
    let den_peak = pairs.iter().fold(0.0f64, |m, (_, e)| m.max(e.norm()));
    let root_n = n_med.sqrt();
    let mut alpha = Vec::with_capacity(omega.len());
    let mut masked = Vec::with_capacity(omega.len());
    for (m, e) in pairs {
        if den_peak == 0.0 || e.norm() <= MASK_FLOOR * den_peak {
            alpha.push(C64::new(0.0, 0.0));
            masked.push(true);
        } else {
            alpha.push(m / (e * root_n));
            masked.push(false);
        }
    }
    Ok(Polarizability { alpha, masked })
}

impl Spectrum {
    pub fn from_polarizability(omega: Vec<f64>, pol: Polarizability, n_med: f64) -> Self {
        let sigma = omega
            .iter()
            .zip(&pol.alpha)
            .zip(&pol.masked)
            .map(|((&w, &a), &m)| if m { 0.0 } else { convert_cross_section(a, w, n_med) })
            .collect();
        Spectrum { omega, alpha: pol.alpha, sigma, masked: pol.masked }
    }

    pub fn masked_count(&self) -> usize {
        self.masked.iter().filter(|&&m| m).count()
    }

    pub fn peak_height(&self) -> f64 {
        self.unmasked().map(|(_, s)| s).fold(f64::NEG_INFINITY, f64::max)
    }

    fn unmasked(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omega
            .iter()
            .zip(&self.sigma)
            .zip(&self.masked)
            .filter(|(_, &m)| !m)
            .map(|((&w, &s), _)| (w, s))
    }

    /// Location and value of the smallest σ within `center ± half_width`.
    pub fn dip(&self, center: f64, half_width: f64) -> Option<(f64, f64)> {
        self.unmasked()
            .filter(|(w, _)| (w - center).abs() <= half_width)
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Lower of the two flanking maxima within `shoulder` of the dip, minus
    /// the dip value.
    pub fn dip_depth(&self, center: f64, search: f64, shoulder: f64) -> Option<f64> {
        let (w0, s0) = self.dip(center, search)?;
        let side_max = |left: bool| {
            self.unmasked()
                .filter(|(w, _)| if left { *w < w0 && w0 - w <= shoulder } else { *w > w0 && w - w0 <= shoulder })
                .map(|(_, s)| s)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let depth = side_max(true).min(side_max(false)) - s0;
        depth.is_finite().then_some(depth)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "omega_eV,sigma_cm2,re_alpha,im_alpha,masked_flag")?;
        for k in 0..self.omega.len() {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_sig(self.omega[k]),
                fmt_sig(self.sigma[k]),
                fmt_sig(self.alpha[k].re),
                fmt_sig(self.alpha[k].im),
                self.masked[k] as u8
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumOptions {
    pub grid: FrequencyGrid,
    pub t_end: f64,
    pub dt: f64,
    /// Integrator steps between dipole samples.
    pub stride: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { grid: FrequencyGrid::DEFAULT, t_end: 2500.0, dt: 0.005, stride: 20 }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumRun {
    pub spectrum: Spectrum,
    pub trajectory: Trajectory,
}

/// Ground-state start, pulsed drive, record `⟨μ⟩`, transform.
pub fn run_spectrum_scenario(
    params: &ParameterSet,
    basis: &Basis,
    solver: SolverKind,
    drive: &DriveSpec,
    options: &SpectrumOptions,
) -> Result<SpectrumRun> {
    if drive.cw_mode {
        return invalid("spectra need a pulsed drive; continuous-wave runs are dynamics scenarios");
    }
    drive.validate()?;
    let spec = PropagationSpec {
        t_end: options.t_end,
        dt: options.dt,
        record: RecordSpec { stride: options.stride, snapshots: false, positivity: true },
    };
    let trajectory = match solver {
        SolverKind::Lindblad => propagate_lindblad(&DensityMatrix::ground(*basis), params, drive, &spec)?,
        SolverKind::NonHermitian => propagate_nonhermitian(&WavePacket::ground(*basis), params, drive, &spec)?,
        SolverKind::Manifold => return invalid("the single-excitation manifold has no driven spectrum"),
    };
    let field: Vec<f64> = trajectory.times.iter().map(|&t| drive.field_at(t)).collect();
    let omega = options.grid.points()?;
    let pol = polarizability(&trajectory.dipole, &field, &trajectory.times, &omega, params.n_med)?;
    Ok(SpectrumRun { spectrum: Spectrum::from_polarizability(omega, pol, params.n_med), trajectory })
}
