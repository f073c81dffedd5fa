//! Single-excitation manifold: one quantum shared between the plasmon and N
//! dots, evolved without drive under the (N+1)×(N+1) non-Hermitian
//! Hamiltonian.
//!
//! Row/column 0 is the plasmon excitation |s=1, all dots down⟩, row j the
//! state with only dot j excited. All matrix entries are energies in eV.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dynamics::{SolverKind, Trajectory};
use crate::entanglement::average_bipartite_concurrence;
use crate::error::{invalid, Result};
use crate::linalg;
use crate::model::ParameterSet;
use crate::units::HBAR_EV_FS;

/// Eigenvector matrices worse conditioned than this are not trusted.
pub const CONDITION_LIMIT: f64 = 1e8;
/// Step used when falling back to Runge–Kutta integration.
pub const FALLBACK_DT_FS: f64 = 0.005;

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldHamiltonian {
    matrix: DMatrix<C64>,
    couplings: Vec<f64>,
}

impl ManifoldHamiltonian {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn n_dots(&self) -> usize {
        self.couplings.len()
    }

    pub fn dim(&self) -> usize {
        self.couplings.len() + 1
    }
}

/// Plasmon diagonal ω_pl − iγ_pl/2, dot diagonals ω₀ − iΓ/2 with
/// Γ = 2γ₂* + γ₁, and g_j in row and column 0.
pub fn build_manifold_hamiltonian(params: &ParameterSet, couplings: &[f64]) -> Result<ManifoldHamiltonian> {
    params.validate()?;
    if couplings.is_empty() {
        return invalid("the manifold needs at least one dot");
    }
    if couplings.len() != params.n_dots() {
        return invalid(format!("{} couplings given for {} dots", couplings.len(), params.n_dots()));
    }
    if params.e_l != 0.0 {
        return invalid("the single-excitation manifold is closed only without drive (e_l must be 0)");
    }
    if let Some(g) = couplings.iter().find(|g| !g.is_finite()) {
        return invalid(format!("coupling {g} is not finite"));
    }
    let n = couplings.len();
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = C64::new(params.omega_pl, -params.gamma_pl / 2.0);
    let dot = C64::new(params.omega0, -params.big_gamma() / 2.0);
    for (j, &g) in couplings.iter().enumerate() {
        m[(j + 1, j + 1)] = dot;
        m[(0, j + 1)] = C64::new(g, 0.0);
        m[(j + 1, 0)] = C64::new(g, 0.0);
    }
    Ok(ManifoldHamiltonian { matrix: m, couplings: couplings.to_vec() })
}

/// Manifold Hamiltonian with the couplings stored in `params.g`.
pub fn manifold_from_params(params: &ParameterSet) -> Result<ManifoldHamiltonian> {
    build_manifold_hamiltonian(params, &params.g)
}

/// Propagator Ψ(t) = V·exp(−iΛt/ħ)·V⁻¹·Ψ(0), or Runge–Kutta stepping when the
/// eigenvectors are too ill-conditioned to invert reliably.
#[derive(Clone, Debug)]
pub struct ManifoldPropagator {
    matrix: DMatrix<C64>,
    eigenvalues: DVector<C64>,
    vectors: DMatrix<C64>,
    inverse: Option<DMatrix<C64>>,
    condition: f64,
}

impl ManifoldPropagator {
    pub fn new(h: &ManifoldHamiltonian) -> Result<Self> {
        let eig = linalg::eigen(h.matrix())?;
        let sv = eig.vectors.clone().svd(false, false).singular_values;
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        let inverse = if condition <= CONDITION_LIMIT { eig.vectors.clone().try_inverse() } else { None };
        if inverse.is_none() {
            log::warn!(
                "manifold eigenvectors have condition number {condition:.3e}; falling back to Runge-Kutta stepping"
            );
        }
        Ok(ManifoldPropagator {
            matrix: h.matrix().clone(),
            eigenvalues: eig.values,
            vectors: eig.vectors,
            inverse,
            condition,
        })
    }

    pub fn eigenvalues(&self) -> &DVector<C64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    pub fn condition_number(&self) -> f64 {
        self.condition
    }

    pub fn uses_eigenbasis(&self) -> bool {
        self.inverse.is_some()
    }

    /// States at each requested time (fs, nonnegative, nondecreasing).
    pub fn evolve(&self, psi0: &DVector<C64>, times: &[f64]) -> Result<Vec<DVector<C64>>> {
        if psi0.len() != self.matrix.nrows() {
            return invalid(format!("state has {} amplitudes, manifold dimension {}", psi0.len(), self.matrix.nrows()));
        }
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
            return invalid("manifold sample times must be nonnegative and nondecreasing");
        }
        match &self.inverse {
            Some(inv) => {
                let coeffs = inv * psi0;
                Ok(times
                    .iter()
                    .map(|&t| {
                        if t == 0.0 {
                            return psi0.clone();
                        }
                        let phased = DVector::from_iterator(
                            coeffs.len(),
                            coeffs.iter().zip(self.eigenvalues.iter()).map(|(c, l)| {
                                c * (C64::new(0.0, -t / HBAR_EV_FS) * l).exp()
                            }),
                        );
                        &self.vectors * phased
                    })
                    .collect())
            }
            None => Ok(rk4_evolve(&self.matrix, psi0, times, FALLBACK_DT_FS)),
        }
    }
}

/// iħ dΨ/dt = MΨ integrated with classical RK4; each sample time is reached
/// exactly by shortening the last step before it.
pub fn rk4_evolve(m: &DMatrix<C64>, psi0: &DVector<C64>, times: &[f64], dt: f64) -> Vec<DVector<C64>> {
    let gen = m * C64::new(0.0, -1.0 / HBAR_EV_FS);
    let step = |psi: &DVector<C64>, h: f64| {
        let h = C64::new(h, 0.0);
        let k1 = &gen * psi;
        let k2 = &gen * (psi + &k1 * (h / 2.0));
        let k3 = &gen * (psi + &k2 * (h / 2.0));
        let k4 = &gen * (psi + &k3 * h);
        psi + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * (h / 6.0)
    };
    let mut out = Vec::with_capacity(times.len());
    let mut psi = psi0.clone();
    let mut t = 0.0;
    for &target in times {
        let n = ((target - t) / dt).ceil().max(0.0) as usize;
        if n > 0 {
            let h = (target - t) / n as f64;
            for _ in 0..n {
                psi = step(&psi, h);
            }
            t = target;
        }
        out.push(psi.clone());
    }
    out
}

/// One-shot Ψ(t) for a single time.
pub fn eigen_propagate(h: &ManifoldHamiltonian, psi0: &DVector<C64>, t: f64) -> Result<DVector<C64>> {
    let prop = ManifoldPropagator::new(h)?;
    Ok(prop.evolve(psi0, &[t])?.remove(0))
}

/// N draws from Normal(mean, std).
///
/// The stream is ChaCha20 seeded with `seed_from_u64(seed)`, and normals come
/// from the ziggurat sampler of `rand_distr`; both are platform independent.
pub fn sample_couplings(mean: f64, std: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return invalid("at least one coupling must be drawn");
    }
    if !(std >= 0.0) {
        return invalid(format!("coupling spread {std} must be nonnegative"));
    }
    let normal = Normal::new(mean, std).map_err(|e| crate::Error::InvalidArgument(format!("coupling distribution: {e}")))?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| normal.sample(&mut rng)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingMode {
    Homogeneous,
    Inhomogeneous,
}

impl CouplingMode {
    pub fn name(&self) -> &'static str {
        match self {
            CouplingMode::Homogeneous => "homogeneous",
            CouplingMode::Inhomogeneous => "inhomogeneous",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldScenario {
    pub n_dots: usize,
    pub mode: CouplingMode,
    /// Coupling mean and spread (eV); the spread is used only when inhomogeneous.
    pub mean: f64,
    pub std: f64,
    pub seed: u64,
    pub t_end: f64,
    pub sample_step: f64,
}

impl ManifoldScenario {
    pub fn fifty_dots(mode: CouplingMode, seed: u64) -> Self {
        ManifoldScenario { n_dots: 50, mode, mean: 0.0167, std: 0.0167, seed, t_end: 2500.0, sample_step: 1.0 }
    }
}

#[derive(Clone, Debug)]
pub struct ManifoldRun {
    pub couplings: Vec<f64>,
    pub negative_couplings: usize,
    pub condition_number: f64,
    pub eigen_propagated: bool,
    pub trajectory: Trajectory,
    pub average_concurrence: Vec<f64>,
}

impl ManifoldRun {
    pub fn peak_concurrence(&self) -> f64 {
        self.average_concurrence.iter().cloned().fold(0.0, f64::max)
    }
}

/// Dot 1 excited at t = 0, evolved under couplings chosen by `scenario.mode`.
///
/// Loss rates and energies come from `base`; its own coupling list is
/// replaced. Negative sampled couplings are kept as drawn.
pub fn run_manifold_scenario(base: &ParameterSet, scenario: &ManifoldScenario) -> Result<ManifoldRun> {
    let n = scenario.n_dots;
    if n < 2 {
        return invalid("the manifold scenario needs at least two dots");
    }
    if !(scenario.t_end > 0.0 && scenario.sample_step > 0.0) {
        return invalid("manifold t_end and sample step must be positive");
    }
    let steps = scenario.t_end / scenario.sample_step;
    if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
        return invalid("manifold t_end must be a whole number of sample steps");
    }
    let couplings = match scenario.mode {
        CouplingMode::Homogeneous => vec![scenario.mean; n],
        CouplingMode::Inhomogeneous => sample_couplings(scenario.mean, scenario.std, n, scenario.seed)?,
    };
    let mut params = base.clone();
    params.g = couplings.clone();
    let h = build_manifold_hamiltonian(&params, &couplings)?;
    let prop = ManifoldPropagator::new(&h)?;

    let times: Vec<f64> = (0..=steps.round() as usize).map(|k| k as f64 * scenario.sample_step).collect();
    let mut psi0 = DVector::zeros(n + 1);
    psi0[1] = C64::new(1.0, 0.0);
    let states = prop.evolve(&psi0, &times)?;

    let mut traj = Trajectory::new(SolverKind::Manifold, n);
    let mut average = Vec::with_capacity(times.len());
    for (t, psi) in times.iter().zip(&states) {
        traj.times.push(*t);
        for j in 0..n {
            traj.dot_populations[j].push(psi[j + 1].norm_sqr());
        }
        traj.plasmon_population.push(psi[0].norm_sqr());
        // μ only connects the manifold to the ground and doubly excited states.
        traj.dipole.push(0.0);
        traj.norm_or_trace.push(psi.norm_squared());
        average.push(average_bipartite_concurrence(psi.as_slice())?);
    }
    Ok(ManifoldRun {
        negative_couplings: couplings.iter().filter(|g| **g < 0.0).count(),
        couplings,
        condition_number: prop.condition_number(),
        eigen_propagated: prop.uses_eigenbasis(),
        trajectory: traj,
        average_concurrence: average,
    })
}

/// Fifty dots with coherence-set rates.
pub fn run_fifty_dot_scenario(mode: CouplingMode, seed: u64, t_end: f64, sample_step: f64) -> Result<ManifoldRun> {
    let scenario = ManifoldScenario { t_end, sample_step, ..ManifoldScenario::fifty_dots(mode, seed) };
    run_manifold_scenario(&ParameterSet::coherence(scenario.n_dots), &scenario)
}
