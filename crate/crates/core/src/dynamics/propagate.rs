//! Fixed-step RK4 propagation of the Lindblad master equation and of the
//! non-Hermitian Schrödinger equation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::state::{min_hermitian_eigenvalue, DensityMatrix, QuantumState, WavePacket};
use super::trajectory::{SolverKind, Trajectory};
use crate::drive::DriveSpec;
use crate::error::{invalid, Error, Result};
use crate::model::{
    bare_hamiltonian, build_collapse_operators, collapse_rate_operator, dipole_operator, max_anti_hermitian,
    Basis, OperatorMatrix, ParameterSet, SparseOp,
};
use crate::units::{CONSTANTS, HBAR_EV_FS};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Lindblad trace drift that aborts a propagation.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;
/// Most negative density-matrix eigenvalue tolerated during propagation.
pub const NEGATIVITY_LIMIT: f64 = -1e-6;
/// Relative norm growth that flags an unstable wave-packet propagation.
pub const NORM_GROWTH_LIMIT: f64 = 1e-6;

pub const DEFAULT_DT_FS: f64 = 0.005;
pub const DEFAULT_T_END_FS: f64 = 2500.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecordSpec {
    /// Record every `stride` integrator steps.
    pub stride: usize,
    /// Keep the full state at every recorded time.
    pub snapshots: bool,
    /// Diagonalize ρ at every recorded time (Lindblad only).
    pub positivity: bool,
}

impl Default for RecordSpec {
    fn default() -> Self {
        RecordSpec { stride: 200, snapshots: false, positivity: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagationSpec {
    pub t_end: f64,
    pub dt: f64,
    pub record: RecordSpec,
}

impl Default for PropagationSpec {
    fn default() -> Self {
        PropagationSpec { t_end: DEFAULT_T_END_FS, dt: DEFAULT_DT_FS, record: RecordSpec::default() }
    }
}

impl PropagationSpec {
    fn n_steps(&self) -> Result<usize> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return invalid(format!("time step must be > 0, got {}", self.dt));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return invalid(format!("propagation time must be > 0, got {}", self.t_end));
        }
        if self.record.stride == 0 {
            return invalid("record stride must be >= 1");
        }
        let n = self.t_end / self.dt;
        let steps = n.round();
        if (n - steps).abs() > 1e-6 * n.max(1.0) {
            return invalid(format!("t_end {} is not a whole number of steps of {}", self.t_end, self.dt));
        }
        let steps = steps as usize;
        if steps % self.record.stride != 0 {
            return invalid(format!(
                "{steps} steps are not a multiple of the record stride {}",
                self.record.stride
            ));
        }
        Ok(steps)
    }
}

/// Dense reference evaluation of
/// `(1/iħ)[H, ρ] + Σ_k (C_k ρ C_k† − ½{C_k†C_k, ρ})`.
pub fn lindblad_rhs(rho: &DensityMatrix, h: &OperatorMatrix, collapse: &[OperatorMatrix]) -> Result<DMatrix<C64>> {
    let d = rho.basis().dim();
    if h.dim() != d || collapse.iter().any(|c| c.dim() != d) {
        return invalid("operator and density-matrix dimensions differ");
    }
    let r = rho.matrix();
    let hm = h.matrix();
    let mut out = (hm * r - r * hm) * C64::new(0.0, -1.0 / HBAR_EV_FS);
    for c in collapse {
        let cm = c.matrix();
        let cd = cm.adjoint();
        let cdc = &cd * cm;
        out += cm * r * &cd - (&cdc * r + r * &cdc) * C64::new(0.5, 0.0);
    }
    Ok(out)
}

/// Compiled generator shared by both backends.
///
/// K(t) = H₀ − (iħ/2)ΣC†C − κE(t)μ is stored on one sparse pattern with a
/// static and a field-proportional coefficient per entry.
#[derive(Clone, Debug)]
pub struct SystemGenerator {
    basis: Basis,
    pattern: Vec<(usize, usize)>,
    k_static: Vec<C64>,
    k_field: Vec<C64>,
    k_now: Vec<C64>,
    collapse: Vec<SparseOp>,
    dipole: SparseOp,
    drive: DriveSpec,
}

impl SystemGenerator {
    pub fn new(params: &ParameterSet, basis: Basis, drive: DriveSpec) -> Result<Self> {
        params.validate()?;
        drive.validate()?;
        let h0 = bare_hamiltonian(params, &basis)?;
        let collapse = build_collapse_operators(params, &basis)?;
        let loss = collapse_rate_operator(&collapse, &basis);
        let mu = dipole_operator(params, &basis)?;

        let k0 = h0.matrix() - loss.matrix() * C64::new(0.0, HBAR_EV_FS / 2.0);
        let kf = mu.matrix() * C64::new(-CONSTANTS.debye_au_to_ev, 0.0);
        let d = basis.dim();
        let mut pattern = Vec::new();
        let mut k_static = Vec::new();
        let mut k_field = Vec::new();
        for i in 0..d {
            for k in 0..d {
                if k0[(i, k)] != ZERO || (kf[(i, k)] != ZERO && !drive.is_off()) {
                    pattern.push((i, k));
                    k_static.push(k0[(i, k)]);
                    k_field.push(kf[(i, k)]);
                }
            }
        }
        let k_now = k_static.clone();
        Ok(SystemGenerator {
            basis,
            pattern,
            k_static,
            k_field,
            k_now,
            collapse: collapse
                .iter()
                .map(OperatorMatrix::to_sparse)
                .filter(|c| c.nnz() > 0)
                .collect(),
            dipole: mu.to_sparse(),
            drive,
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    fn set_time(&mut self, t: f64) {
        let e = self.drive.field_at(t);
        if e == 0.0 {
            self.k_now.copy_from_slice(&self.k_static);
        } else {
            for ((now, s), f) in self.k_now.iter_mut().zip(&self.k_static).zip(&self.k_field) {
                *now = s + f * e;
            }
        }
    }

    /// dψ/dt = −(i/ħ) K(t) ψ
    fn schrodinger_rhs(&mut self, t: f64, psi: &[C64], out: &mut [C64]) {
        self.set_time(t);
        out.fill(ZERO);
        let scale = C64::new(0.0, -1.0 / HBAR_EV_FS);
        for (&(i, k), v) in self.pattern.iter().zip(&self.k_now) {
            out[i] += scale * v * psi[k];
        }
    }

    /// dρ/dt = −(i/ħ)(Kρ − ρK†) + Σ CρC†, with ρK† taken as (Kρ)†.
    fn lindblad_rhs(&mut self, t: f64, rho: &[C64], scratch: &mut [C64], out: &mut [C64]) {
        self.set_time(t);
        let n = self.basis.dim();
        scratch.fill(ZERO);
        for j in 0..n {
            let col = &rho[j * n..(j + 1) * n];
            let acc = &mut scratch[j * n..(j + 1) * n];
            for (&(i, k), v) in self.pattern.iter().zip(&self.k_now) {
                acc[i] += v * col[k];
            }
        }
        let scale = C64::new(0.0, -1.0 / HBAR_EV_FS);
        for j in 0..n {
            for i in 0..n {
                out[i + j * n] = scale * (scratch[i + j * n] - scratch[j + i * n].conj());
            }
        }
        for c in &self.collapse {
            c.sandwich_acc(rho, out);
        }
    }

    /// Compiled Lindblad kernel evaluated at time `t`, returned as a dense matrix.
    pub fn lindblad_derivative(&mut self, t: f64, rho: &DensityMatrix) -> DMatrix<C64> {
        let n = self.basis.dim();
        let mut scratch = vec![ZERO; n * n];
        let mut out = vec![ZERO; n * n];
        self.lindblad_rhs(t, rho.matrix().as_slice(), &mut scratch, &mut out);
        DMatrix::from_vec(n, n, out)
    }
}

/// Entries this small are zeroed after every step. Left alone, decaying
/// coherences drift into subnormal range, where arithmetic is very slow.
const FLUSH_BELOW: f64 = 1e-150;

fn flush_tiny(y: &mut [C64]) {
    for z in y.iter_mut() {
        if z.re.abs() < FLUSH_BELOW {
            z.re = 0.0;
        }
        if z.im.abs() < FLUSH_BELOW {
            z.im = 0.0;
        }
    }
}

/// Replaces a column-major `n × n` matrix by its Hermitian part.
///
/// The Lindblad kernel takes ρK† as (Kρ)†, which is exact only for Hermitian
/// ρ. An anti-Hermitian roundoff component would otherwise be fed by the jump
/// terms without the matching loss and grow.
fn hermitize(rho: &mut [C64], n: usize) {
    for j in 0..n {
        rho[j + j * n].im = 0.0;
        for i in j + 1..n {
            let avg = (rho[i + j * n] + rho[j + i * n].conj()) * 0.5;
            rho[i + j * n] = avg;
            rho[j + i * n] = avg.conj();
        }
    }
}

struct Rk4 {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4 {
    fn new(n: usize) -> Self {
        Rk4 { k1: vec![ZERO; n], k2: vec![ZERO; n], k3: vec![ZERO; n], k4: vec![ZERO; n], tmp: vec![ZERO; n] }
    }

    fn step<F>(&mut self, f: &mut F, t: f64, dt: f64, y: &mut [C64])
    where
        F: FnMut(f64, &[C64], &mut [C64]),
    {
        let h = C64::new(dt, 0.0);
        let half = C64::new(dt / 2.0, 0.0);
        f(t, y, &mut self.k1);
        for ((tmp, y), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k1) {
            *tmp = y + half * k;
        }
        f(t + dt / 2.0, &self.tmp, &mut self.k2);
        for ((tmp, y), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k2) {
            *tmp = y + half * k;
        }
        f(t + dt / 2.0, &self.tmp, &mut self.k3);
        for ((tmp, y), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k3) {
            *tmp = y + h * k;
        }
        f(t + dt, &self.tmp, &mut self.k4);
        let sixth = C64::new(dt / 6.0, 0.0);
        for i in 0..y.len() {
            y[i] += sixth * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
        flush_tiny(y);
    }
}

/// Diagonal weights for ⟨σ_j†σ_j⟩ and ⟨b†b⟩.
struct Counters {
    dots: Vec<Vec<f64>>,
    plasmon: Vec<f64>,
}

impl Counters {
    fn new(basis: &Basis) -> Self {
        let d = basis.dim();
        let dots = (1..=basis.n_dots())
            .map(|j| (0..d).map(|i| basis.dot_state(i, j) as f64).collect())
            .collect();
        let plasmon = (0..d).map(|i| basis.plasmon_number(i) as f64).collect();
        Counters { dots, plasmon }
    }

    fn record(&self, traj: &mut Trajectory, diag: &[f64]) {
        for (j, w) in self.dots.iter().enumerate() {
            traj.dot_populations[j].push(w.iter().zip(diag).map(|(a, b)| a * b).sum());
        }
        traj.plasmon_population.push(self.plasmon.iter().zip(diag).map(|(a, b)| a * b).sum());
    }
}

fn check_basis(params: &ParameterSet, basis: &Basis) -> Result<()> {
    if params.n_dots() != basis.n_dots() {
        return invalid(format!("state has {} dots, parameters describe {}", basis.n_dots(), params.n_dots()));
    }
    Ok(())
}

/// Integrates the Lindblad master equation from `rho0`.
pub fn propagate_lindblad(
    rho0: &DensityMatrix,
    params: &ParameterSet,
    drive: &DriveSpec,
    spec: &PropagationSpec,
) -> Result<Trajectory> {
    let basis = *rho0.basis();
    check_basis(params, &basis)?;
    let steps = spec.n_steps()?;
    let mut gen = SystemGenerator::new(params, basis, *drive)?;
    let n = basis.dim();
    let counters = Counters::new(&basis);

    let mut rho: Vec<C64> = rho0.matrix().as_slice().to_vec();
    let mut scratch = vec![ZERO; n * n];
    let mut rk = Rk4::new(n * n);
    let mut traj = Trajectory::new(SolverKind::Lindblad, basis.n_dots());

    let record = |traj: &mut Trajectory, gen: &SystemGenerator, t: f64, rho: &[C64]| -> Result<()> {
        let diag: Vec<f64> = (0..n).map(|i| rho[i + i * n].re).collect();
        let trace: f64 = diag.iter().sum();
        if !trace.is_finite() || (trace - 1.0).abs() > TRACE_DRIFT_LIMIT {
            return Err(Error::PropagationDiagnostic { time_fs: t, message: format!("trace drifted to {trace}") });
        }
        let m = DMatrix::from_column_slice(n, n, rho);
        traj.times.push(t);
        counters.record(traj, &diag);
        traj.dipole.push(gen.dipole.trace_with(rho).re);
        traj.norm_or_trace.push(trace);
        traj.hermiticity.push(max_anti_hermitian(&m));
        if spec.record.positivity {
            let min = min_hermitian_eigenvalue(&m);
            if !(min >= NEGATIVITY_LIMIT) {
                return Err(Error::PropagationDiagnostic {
                    time_fs: t,
                    message: format!("density matrix eigenvalue {min:.3e}"),
                });
            }
            traj.min_eigenvalue.push(min);
        }
        if spec.record.snapshots {
            traj.snapshots.push((t, QuantumState::Density(DensityMatrix::new_unchecked(m, basis)?)));
        }
        Ok(())
    };

    record(&mut traj, &gen, 0.0, &rho)?;
    for step in 0..steps {
        let t = step as f64 * spec.dt;
        rk.step(&mut |t, y: &[C64], out: &mut [C64]| gen.lindblad_rhs(t, y, &mut scratch, out), t, spec.dt, &mut rho);
        hermitize(&mut rho, n);
        let done = step + 1;
        if done % spec.record.stride == 0 {
            record(&mut traj, &gen, done as f64 * spec.dt, &rho)?;
        }
    }
    Ok(traj)
}

/// Integrates iħ dΨ/dt = H_c(t)Ψ from `psi0`.
pub fn propagate_nonhermitian(
    psi0: &WavePacket,
    params: &ParameterSet,
    drive: &DriveSpec,
    spec: &PropagationSpec,
) -> Result<Trajectory> {
    let basis = *psi0.basis();
    check_basis(params, &basis)?;
    let steps = spec.n_steps()?;
    let mut gen = SystemGenerator::new(params, basis, *drive)?;
    let n = basis.dim();
    let counters = Counters::new(&basis);
    let norm0 = psi0.norm_sqr();
    if !(norm0 > 0.0) {
        return invalid("initial wave packet has zero norm");
    }

    let mut psi: Vec<C64> = psi0.amplitudes().as_slice().to_vec();
    let mut rk = Rk4::new(n);
    let mut traj = Trajectory::new(SolverKind::NonHermitian, basis.n_dots());

    let record = |traj: &mut Trajectory, gen: &SystemGenerator, t: f64, psi: &[C64]| -> Result<()> {
        let diag: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();
        let norm: f64 = diag.iter().sum();
        if !norm.is_finite() || norm > norm0 * (1.0 + NORM_GROWTH_LIMIT) {
            return Err(Error::PropagationDiagnostic {
                time_fs: t,
                message: format!("wave-packet norm grew to {norm} (initial {norm0})"),
            });
        }
        traj.times.push(t);
        counters.record(traj, &diag);
        traj.dipole.push(gen.dipole.expectation_vec(psi).re);
        traj.norm_or_trace.push(norm);
        if spec.record.snapshots {
            let w = WavePacket::new(DVector::from_column_slice(psi), basis)?;
            traj.snapshots.push((t, QuantumState::Wave(w)));
        }
        Ok(())
    };

    record(&mut traj, &gen, 0.0, &psi)?;
    for step in 0..steps {
        let t = step as f64 * spec.dt;
        rk.step(&mut |t, y: &[C64], out: &mut [C64]| gen.schrodinger_rhs(t, y, out), t, spec.dt, &mut psi);
        let done = step + 1;
        if done % spec.record.stride == 0 {
            record(&mut traj, &gen, done as f64 * spec.dt, &psi)?;
        }
    }
    Ok(traj)
}
