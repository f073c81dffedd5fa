//! Reduced two-dot density matrices and Wootters concurrence.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{min_hermitian_eigenvalue, QuantumState, Trajectory};
use crate::error::{invalid, Result};
use crate::model::Basis;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Two-dot density matrix in the order |q₁q₂⟩ = 00, 01, 10, 11.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitDensityMatrix {
    matrix: Matrix4<C64>,
}

impl TwoQubitDensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-8;
    pub const POSITIVITY_TOL: f64 = 1e-8;

    pub fn new(matrix: Matrix4<C64>) -> Result<Self> {
        let herm = (0..4)
            .flat_map(|i| (0..4).map(move |k| (i, k)))
            .map(|(i, k)| (matrix[(i, k)] - matrix[(k, i)].conj()).norm())
            .fold(0.0, f64::max);
        if !(herm <= Self::HERMITIAN_TOL) {
            return invalid(format!("two-dot density matrix is not Hermitian (deviation {herm:.3e})"));
        }
        let trace = matrix.trace().re;
        if !(trace <= 1.0 + Self::TRACE_TOL) {
            return invalid(format!("two-dot density matrix has trace {trace}"));
        }
        let min = min_hermitian_eigenvalue(&DMatrix::from_iterator(4, 4, matrix.iter().cloned()));
        if !(min >= -Self::POSITIVITY_TOL) {
            return invalid(format!("two-dot density matrix has eigenvalue {min:.3e}"));
        }
        Ok(TwoQubitDensityMatrix { matrix })
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// How a decayed wave packet's missing norm enters the reduced state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormPadding {
    /// Lost norm is assigned to the global ground state.
    #[default]
    Ground,
    /// |Ψ⟩⟨Ψ| as is; the trace equals ⟨Ψ|Ψ⟩.
    Raw,
}

/// Partial trace down to dots `i` and `j` (1-based, `i` first in the pair).
pub fn reduce_to_pair(state: &QuantumState, i: usize, j: usize, padding: NormPadding) -> Result<TwoQubitDensityMatrix> {
    let basis = *state.basis();
    basis.check_dot(i)?;
    basis.check_dot(j)?;
    if i == j {
        return invalid("concurrence needs two distinct dots");
    }
    let bi = 1usize << (basis.n_dots() - i);
    let bj = 1usize << (basis.n_dots() - j);
    let at = |rest: usize, a: usize| rest | if a & 2 != 0 { bi } else { 0 } | if a & 1 != 0 { bj } else { 0 };
    let rests = (0..basis.dim()).filter(|x| x & (bi | bj) == 0);

    let mut m = Matrix4::<C64>::zeros();
    match state {
        QuantumState::Density(rho) => {
            let r = rho.matrix();
            for rest in rests {
                for a in 0..4 {
                    for b in 0..4 {
                        m[(a, b)] += r[(at(rest, a), at(rest, b))];
                    }
                }
            }
        }
        QuantumState::Wave(w) => {
            let psi = w.amplitudes();
            for rest in rests {
                for a in 0..4 {
                    let x = psi[at(rest, a)];
                    if x == ZERO {
                        continue;
                    }
                    for b in 0..4 {
                        m[(a, b)] += x * psi[at(rest, b)].conj();
                    }
                }
            }
            if padding == NormPadding::Ground {
                m[(0, 0)] += 1.0 - w.norm_sqr();
            }
        }
    }
    TwoQubitDensityMatrix::new(m)
}

/// Reduced state of a two-dot system with the plasmon traced out.
pub fn reduce_to_dots(state: &QuantumState, padding: NormPadding) -> Result<TwoQubitDensityMatrix> {
    let n = state.basis().n_dots();
    if n != 2 {
        return invalid(format!("reduction to a dot pair needs exactly 2 dots, basis has {n}"));
    }
    reduce_to_pair(state, 1, 2, padding)
}

/// Wootters concurrence C = max(0, λ₁ − λ₂ − λ₃ − λ₄).
///
/// The λ are the decreasing square roots of the eigenvalues of ρρ̃ with
/// ρ̃ = (σ_y⊗σ_y)ρ*(σ_y⊗σ_y). They are obtained as the singular values of
/// A†(σ_y⊗σ_y)A* for ρ = AA†, which has the same nonzero spectrum squared and
/// avoids taking square roots of roundoff-level eigenvalues. Eigenvalues of ρ
/// below working precision are treated as zero.
pub fn wootters_concurrence(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    let herm = DMatrix::from_iterator(4, 4, (m + m.adjoint()).iter().map(|z| z * 0.5));
    let eig = herm.symmetric_eigen();
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let cutoff = 1e3 * f64::EPSILON * top.max(f64::MIN_POSITIVE);
    let kept: Vec<usize> = (0..4).filter(|&k| eig.eigenvalues[k] > cutoff).collect();
    if kept.is_empty() {
        return Ok(0.0);
    }
    let a = DMatrix::from_fn(4, kept.len(), |i, c| {
        let k = kept[c];
        eig.eigenvectors[(i, k)] * eig.eigenvalues[k].sqrt()
    });
    // σ_y⊗σ_y maps |ab⟩ to ±|āb̄⟩, with − for 00 and 11.
    let mut y = DMatrix::<C64>::zeros(4, 4);
    for (k, sign) in [-1.0, 1.0, 1.0, -1.0].into_iter().enumerate() {
        y[(k, 3 - k)] = C64::new(sign, 0.0);
    }
    let b = a.adjoint() * y * a.map(|z| z.conj());
    let mut lam: Vec<f64> = b.singular_values().iter().cloned().collect();
    lam.resize(4, 0.0);
    lam.sort_by(|x, y| y.total_cmp(x));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).clamp(0.0, 1.0))
}

fn check_manifold_norm(amplitudes: &[C64]) -> Result<()> {
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if !(norm <= 1.0 + 1e-8) {
        return invalid(format!("single-excitation amplitudes have norm {norm}"));
    }
    Ok(())
}

/// C_ij = 2|α_i||α_j| for a single-excitation state with `amplitudes[0]` on
/// the plasmon and `amplitudes[j]` on dot `j`.
pub fn manifold_pair_concurrence(amplitudes: &[C64], i: usize, j: usize) -> Result<f64> {
    let n = amplitudes.len().saturating_sub(1);
    for k in [i, j] {
        if k == 0 || k > n {
            return invalid(format!("dot index {k} out of range 1..={n}"));
        }
    }
    if i == j {
        return invalid("concurrence needs two distinct dots");
    }
    check_manifold_norm(amplitudes)?;
    Ok(2.0 * amplitudes[i].norm() * amplitudes[j].norm())
}

/// Mean of C_ij over all unordered dot pairs.
pub fn average_bipartite_concurrence(amplitudes: &[C64]) -> Result<f64> {
    let n = amplitudes.len().saturating_sub(1);
    if n < 2 {
        return invalid("average concurrence needs at least two dots");
    }
    check_manifold_norm(amplitudes)?;
    let dots = &amplitudes[1..];
    let sum: f64 = dots.iter().map(|a| a.norm()).sum();
    let sum_sq: f64 = dots.iter().map(|a| a.norm_sqr()).sum();
    // Σ_{i<j} 2|α_i||α_j| = (Σ|α|)² − Σ|α|²
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(((sum * sum - sum_sq) / pairs).max(0.0))
}

/// Concurrence of dots 1 and 2 at every snapshot of a trajectory.
pub fn concurrence_series(traj: &Trajectory, padding: NormPadding) -> Result<Vec<(f64, f64)>> {
    if traj.snapshots.is_empty() {
        return invalid("trajectory holds no state snapshots");
    }
    traj.snapshots
        .iter()
        .map(|(t, state)| Ok((*t, wootters_concurrence(&reduce_to_dots(state, padding)?)?)))
        .collect()
}

/// Single-excitation amplitudes (plasmon, dot 1, …) read off a full-space state.
pub fn manifold_amplitudes(psi: &[C64], basis: &Basis) -> Vec<C64> {
    let n = basis.n_dots();
    let mut out = vec![psi[basis.dot_block()]];
    out.extend((1..=n).map(|j| psi[1 << (n - j)]));
    out
}
