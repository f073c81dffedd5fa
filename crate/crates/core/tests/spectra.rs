use qdplasmon::drive::DriveSpec;
use qdplasmon::dynamics::SolverKind;
use qdplasmon::model::{build_basis, ParameterSet};
use qdplasmon::spectra::*;

fn fwhm(s: &Spectrum) -> f64 {
    let peak = s.peak_height();
    let above: Vec<f64> =
        s.omega.iter().zip(&s.sigma).filter(|(_, &v)| v >= peak / 2.0).map(|(&w, _)| w).collect();
    above.last().unwrap() - above.first().unwrap()
}

#[test]
fn bare_plasmon_line() {
    let mut p = ParameterSet::optical_spectra(1);
    p.g = vec![0.0];
    p.d0 = 0.0;
    let basis = build_basis(1, 5).unwrap();
    let options = SpectrumOptions {
        grid: FrequencyGrid { omega_min: 1.6, omega_max: 2.5, omega_step: 1e-3 },
        t_end: 600.0,
        ..Default::default()
    };
    let run = run_spectrum_scenario(&p, &basis, SolverKind::NonHermitian, &DriveSpec::from_params(&p), &options).unwrap();
    let s = &run.spectrum;
    assert_eq!(s.masked_count(), 0);
    let width = fwhm(s);
    assert!((width - 0.150).abs() < 0.150 * 0.05, "FWHM {width}");
    let (w_peak, _) = s.omega.iter().zip(&s.sigma).fold((0.0, f64::MIN), |m, (&w, &v)| if v > m.1 { (w, v) } else { m });
    assert!((w_peak - p.omega_pl).abs() < 0.01);
    // No dot contribution: no dip anywhere near the dot line.
    let (_, dip) = s.dip(p.omega0, 0.01).unwrap();
    assert!(dip > 0.9 * s.peak_height());
}

#[test]
fn response_is_linear_in_field() {
    let p = ParameterSet::optical_spectra(1);
    let basis = build_basis(1, 5).unwrap();
    let options = SpectrumOptions {
        grid: FrequencyGrid { omega_min: 1.95, omega_max: 2.15, omega_step: 1e-3 },
        t_end: 3000.0,
        ..Default::default()
    };
    let full = DriveSpec::from_params(&p);
    let half = DriveSpec { e_l: full.e_l / 2.0, ..full };
    let a = run_spectrum_scenario(&p, &basis, SolverKind::NonHermitian, &full, &options).unwrap();
    let b = run_spectrum_scenario(&p, &basis, SolverKind::NonHermitian, &half, &options).unwrap();
    let peak = a.spectrum.peak_height();
    for (x, y) in a.spectrum.sigma.iter().zip(&b.spectrum.sigma) {
        assert!((x - y).abs() < 1e-3 * peak);
    }
}

#[test]
fn short_run_is_rejected() {
    let p = ParameterSet::optical_spectra(1);
    let basis = build_basis(1, 5).unwrap();
    let options = SpectrumOptions { t_end: 500.0, ..Default::default() };
    let err = run_spectrum_scenario(&p, &basis, SolverKind::NonHermitian, &DriveSpec::from_params(&p), &options);
    assert!(matches!(err, Err(qdplasmon::Error::InsufficientPropagation { .. })));
}

#[test]
fn continuous_wave_is_not_a_spectrum() {
    let p = ParameterSet::optical_spectra(1);
    let basis = build_basis(1, 5).unwrap();
    let cw = DriveSpec { cw_mode: true, ..DriveSpec::from_params(&p) };
    assert!(run_spectrum_scenario(&p, &basis, SolverKind::Lindblad, &cw, &SpectrumOptions::default()).is_err());
    assert!(run_spectrum_scenario(&p, &basis, SolverKind::Manifold, &DriveSpec::from_params(&p), &SpectrumOptions::default())
        .is_err());
}

#[test]
fn csv_columns() {
    let mut p = ParameterSet::optical_spectra(1);
    p.g = vec![0.0];
    p.d0 = 0.0;
    let basis = build_basis(1, 3).unwrap();
    let options = SpectrumOptions {
        grid: FrequencyGrid { omega_min: 2.0, omega_max: 2.01, omega_step: 5e-3 },
        t_end: 600.0,
        ..Default::default()
    };
    let run = run_spectrum_scenario(&p, &basis, SolverKind::NonHermitian, &DriveSpec::from_params(&p), &options).unwrap();
    let mut buf = Vec::new();
    run.spectrum.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "omega_eV,sigma_cm2,re_alpha,im_alpha,masked_flag");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1].split(',').count(), 5);
}
