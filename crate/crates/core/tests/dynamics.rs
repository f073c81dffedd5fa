use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdplasmon::drive::DriveSpec;
use qdplasmon::dynamics::*;
use qdplasmon::model::*;
use qdplasmon::units::HBAR_EV_FS;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn random_density(basis: Basis, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = basis.dim();
    let a = DMatrix::from_fn(d, d, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr, basis).unwrap()
}

fn lossless(mut p: ParameterSet) -> ParameterSet {
    p.gamma1 = 0.0;
    p.gamma2_star = 0.0;
    p.gamma_pl = 0.0;
    p
}

#[test]
fn amplitude_damping_rhs() {
    // Single plasmon quantum decaying through C = √γ b.
    let basis = build_basis(1, 3).unwrap();
    let gamma: f64 = 0.25;
    let b = plasmon_annihilation(&basis);
    let cop = OperatorMatrix::new(b.matrix() * c(gamma.sqrt()), basis, false).unwrap();
    let one = basis.index(1, &[0]).unwrap();
    let zero = basis.index(0, &[0]).unwrap();
    let rho = DensityMatrix::basis_projector(basis, one);
    let h = OperatorMatrix::zeros(basis);
    let d = lindblad_rhs(&rho, &h, &[cop]).unwrap();
    assert!((d[(one, one)] - c(-gamma)).norm() < 1e-15);
    assert!((d[(zero, zero)] - c(gamma)).norm() < 1e-15);
}

#[test]
fn dephasing_rhs_only_touches_coherences() {
    let basis = build_basis(1, 2).unwrap();
    let g2 = 0.003 / HBAR_EV_FS;
    let n = dot_number(&basis, 1).unwrap();
    let cop = OperatorMatrix::new(n.matrix() * c((2.0 * g2).sqrt()), basis, false).unwrap();
    let g = basis.index(0, &[0]).unwrap();
    let e = basis.index(0, &[1]).unwrap();
    let mut m = DMatrix::zeros(4, 4);
    m[(g, g)] = c(0.5);
    m[(e, e)] = c(0.5);
    m[(e, g)] = C64::new(0.3, 0.2);
    m[(g, e)] = C64::new(0.3, -0.2);
    let rho = DensityMatrix::new(m.clone(), basis).unwrap();
    let d = lindblad_rhs(&rho, &OperatorMatrix::zeros(basis), &[cop]).unwrap();
    assert_eq!(d[(g, g)], c(0.0));
    assert_eq!(d[(e, e)], c(0.0));
    assert!((d[(e, g)] + m[(e, g)] * g2).norm() < 1e-15);
}

#[test]
fn rhs_is_traceless() {
    let p = ParameterSet::coherence(2);
    let basis = build_basis(2, 3).unwrap();
    let h = build_system_hamiltonian(&p, &basis, 12.0, false).unwrap();
    let cs = build_collapse_operators(&p, &basis).unwrap();
    for seed in 0..5 {
        let rho = random_density(basis, seed);
        let d = lindblad_rhs(&rho, &h, &cs).unwrap();
        assert!(d.trace().norm() < 1e-13);
    }
}

#[test]
fn compiled_kernel_matches_dense_reference() {
    let mut p = ParameterSet::optical_spectra(2);
    p.e_l = 1e-4;
    let basis = build_basis(2, 4).unwrap();
    let drive = DriveSpec::from_params(&p);
    let mut gen = SystemGenerator::new(&p, basis, drive).unwrap();
    let cs = build_collapse_operators(&p, &basis).unwrap();
    for (seed, t) in [(1, 3.0), (2, 47.3), (3, 50.0)] {
        let rho = random_density(basis, seed);
        let h = build_system_hamiltonian(&p, &basis, t, true).unwrap();
        let dense = lindblad_rhs(&rho, &h, &cs).unwrap();
        let fast = gen.lindblad_derivative(t, &rho);
        let err = (dense - fast).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "t={t}: {err}");
    }
}

#[test]
fn dimension_mismatch_rejected() {
    let b1 = build_basis(1, 3).unwrap();
    let b2 = build_basis(1, 4).unwrap();
    let rho = DensityMatrix::ground(b1);
    assert!(lindblad_rhs(&rho, &OperatorMatrix::zeros(b2), &[]).is_err());
}

#[test]
fn vacuum_rabi_oscillation() {
    let p = lossless(ParameterSet::optical_spectra(1));
    let basis = build_basis(1, 3).unwrap();
    let psi = WavePacket::basis_state(basis, 0, &[1]).unwrap();
    let spec = PropagationSpec { t_end: 400.0, dt: 0.005, record: RecordSpec { stride: 200, ..Default::default() } };
    let traj = propagate_lindblad(&DensityMatrix::from_pure(&psi), &p, &DriveSpec::OFF, &spec).unwrap();
    let g = 0.0108 / HBAR_EV_FS;
    for (k, t) in traj.times.iter().enumerate() {
        let expected = (g * t).cos().powi(2);
        assert!((traj.dot_populations[0][k] - expected).abs() < 1e-6, "t={t}");
        assert!((traj.plasmon_population[k] - (1.0 - expected)).abs() < 1e-6);
    }
    // Full period πħ/g ≈ 191.4 fs returns the excitation to the dot.
    let period = std::f64::consts::PI * HBAR_EV_FS / 0.0108;
    assert!((period - 191.4).abs() < 0.1);
    let k = traj.index_near(191.0);
    assert!(traj.dot_populations[0][k] > 0.9999);
}

#[test]
fn ground_state_is_stationary() {
    let p = ParameterSet::coherence(2);
    let basis = build_basis(2, 3).unwrap();
    let spec = PropagationSpec { t_end: 100.0, ..Default::default() };
    let traj = propagate_lindblad(&DensityMatrix::ground(basis), &p, &DriveSpec::OFF, &spec).unwrap();
    for k in 0..traj.len() {
        assert_eq!(traj.dot_populations[0][k], 0.0);
        assert_eq!(traj.dot_populations[1][k], 0.0);
        assert_eq!(traj.plasmon_population[k], 0.0);
        assert_eq!(traj.dipole[k], 0.0);
    }
}

#[test]
fn hermitian_limit_conserves_norm_and_matches_lindblad() {
    let mut p = lossless(ParameterSet::optical_spectra(1));
    p.e_l = 2e-7;
    let basis = build_basis(1, 3).unwrap();
    let drive = DriveSpec::from_params(&p);
    let mut amps = nalgebra::DVector::zeros(basis.dim());
    amps[basis.index(0, &[0]).unwrap()] = c(0.8);
    amps[basis.index(1, &[0]).unwrap()] = C64::new(0.0, 0.6);
    let psi = WavePacket::new(amps, basis).unwrap();
    // RK4 damps |amplitude| by (ω dt)^6/144 per step; at the default 0.005 fs
    // that alone is ~1e-7 over 2500 fs at 2 eV, so the 1e-10 budget needs 0.001 fs.
    let spec = PropagationSpec { t_end: 2500.0, dt: 0.001, record: RecordSpec { stride: 1000, ..Default::default() } };
    let nh = propagate_nonhermitian(&psi, &p, &DriveSpec::OFF, &spec).unwrap();
    for v in &nh.norm_or_trace {
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }
    let short = PropagationSpec { t_end: 200.0, ..Default::default() };
    let nh = propagate_nonhermitian(&psi, &p, &drive, &short).unwrap();
    let lb = propagate_lindblad(&DensityMatrix::from_pure(&psi), &p, &drive, &short).unwrap();
    let mu_scale = nh.dipole.iter().map(|x| x.abs()).fold(0.0, f64::max);
    for k in 0..nh.len() {
        assert!((nh.dot_populations[0][k] - lb.dot_populations[0][k]).abs() < 1e-7);
        assert!((nh.plasmon_population[k] - lb.plasmon_population[k]).abs() < 1e-7);
        assert!((nh.dipole[k] - lb.dipole[k]).abs() < 1e-6 * mu_scale);
    }
}

#[test]
fn exact_equivalence_without_dephasing() {
    let mut p = ParameterSet::coherence(2);
    p.gamma2_star = 0.0;
    let basis = build_basis(2, 3).unwrap();
    let psi = WavePacket::basis_state(basis, 0, &[1, 0]).unwrap();
    let spec = PropagationSpec {
        t_end: 1000.0,
        record: RecordSpec { stride: 200, snapshots: true, positivity: true },
        ..Default::default()
    };
    let nh = propagate_nonhermitian(&psi, &p, &DriveSpec::OFF, &spec).unwrap();
    let lb = propagate_lindblad(&DensityMatrix::from_pure(&psi), &p, &DriveSpec::OFF, &spec).unwrap();
    for k in 0..nh.len() {
        let (QuantumState::Wave(w), QuantumState::Density(r)) = (&nh.snapshots[k].1, &lb.snapshots[k].1) else {
            panic!("unexpected snapshot kinds");
        };
        for i in 1..basis.dim() {
            let diff = (w.amplitudes()[i].norm_sqr() - r.population(i)).abs();
            assert!(diff < 1e-6, "t={} i={i}: {diff}", nh.times[k]);
        }
    }
}

#[test]
fn dephasing_makes_nonhermitian_populations_lower() {
    let p = ParameterSet::coherence(2);
    let basis = build_basis(2, 3).unwrap();
    let psi = WavePacket::basis_state(basis, 0, &[1, 0]).unwrap();
    let spec = PropagationSpec { t_end: 1000.0, ..Default::default() };
    let nh = propagate_nonhermitian(&psi, &p, &DriveSpec::OFF, &spec).unwrap();
    let lb = propagate_lindblad(&DensityMatrix::from_pure(&psi), &p, &DriveSpec::OFF, &spec).unwrap();
    let mut strictly_lower = false;
    for k in 0..nh.len() {
        for j in 0..2 {
            assert!(nh.dot_populations[j][k] <= lb.dot_populations[j][k] + 1e-6);
            strictly_lower |= nh.dot_populations[j][k] < lb.dot_populations[j][k] - 1e-3;
        }
        assert!(nh.plasmon_population[k] <= lb.plasmon_population[k] + 1e-6);
    }
    assert!(strictly_lower);
}

#[test]
fn lindblad_health_is_recorded() {
    let p = ParameterSet::coherence(2);
    let basis = build_basis(2, 3).unwrap();
    let psi = WavePacket::basis_state(basis, 0, &[1, 0]).unwrap();
    let spec = PropagationSpec { t_end: 500.0, ..Default::default() };
    let lb = propagate_lindblad(&DensityMatrix::from_pure(&psi), &p, &DriveSpec::OFF, &spec).unwrap();
    assert_eq!(lb.min_eigenvalue.len(), lb.len());
    for k in 0..lb.len() {
        assert!((lb.norm_or_trace[k] - 1.0).abs() < 1e-8);
        assert!(lb.hermiticity[k] < 1e-10);
        assert!(lb.min_eigenvalue[k] > -1e-8);
    }
}

#[test]
fn time_grid_is_uniform() {
    let p = ParameterSet::coherence(1);
    let basis = build_basis(1, 2).unwrap();
    let spec = PropagationSpec { t_end: 10.0, dt: 0.01, record: RecordSpec { stride: 50, ..Default::default() } };
    let traj = propagate_nonhermitian(&WavePacket::ground(basis), &p, &DriveSpec::OFF, &spec).unwrap();
    assert_eq!(traj.len(), 21);
    for w in traj.times.windows(2) {
        assert!((w[1] - w[0] - 0.5).abs() < 1e-12);
    }
    let bad = PropagationSpec { t_end: 10.0, dt: 0.01, record: RecordSpec { stride: 300, ..Default::default() } };
    assert!(propagate_nonhermitian(&WavePacket::ground(basis), &p, &DriveSpec::OFF, &bad).is_err());
    let bad = PropagationSpec { dt: -1.0, ..spec };
    assert!(propagate_nonhermitian(&WavePacket::ground(basis), &p, &DriveSpec::OFF, &bad).is_err());
}

#[test]
fn unstable_step_is_diagnosed() {
    // dt far beyond the RK4 stability limit for a 2 eV oscillation.
    let p = lossless(ParameterSet::optical_spectra(1));
    let basis = build_basis(1, 3).unwrap();
    let mut amps = nalgebra::DVector::zeros(basis.dim());
    amps[basis.index(0, &[0]).unwrap()] = c(0.6);
    amps[basis.index(1, &[0]).unwrap()] = c(0.8);
    let psi = WavePacket::new(amps, basis).unwrap();
    let spec = PropagationSpec { t_end: 100.0, dt: 1.0, record: RecordSpec { stride: 1, ..Default::default() } };
    let err = propagate_nonhermitian(&psi, &p, &DriveSpec::OFF, &spec).unwrap_err();
    assert!(matches!(err, qdplasmon::Error::PropagationDiagnostic { .. }));
    let err = propagate_lindblad(&DensityMatrix::from_pure(&psi), &p, &DriveSpec::OFF, &spec).unwrap_err();
    assert!(matches!(err, qdplasmon::Error::PropagationDiagnostic { .. }));
}
