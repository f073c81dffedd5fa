use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::model::{max_anti_hermitian, Basis};

/// Density matrix on the full plasmon ⊗ dots space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
    basis: Basis,
}

/// Unnormalized amplitudes α_{s,q₁,…} in the flat basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct WavePacket {
    amplitudes: DVector<C64>,
    basis: Basis,
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Density(DensityMatrix),
    Wave(WavePacket),
}

impl QuantumState {
    pub fn basis(&self) -> &Basis {
        match self {
            QuantumState::Density(r) => r.basis(),
            QuantumState::Wave(w) => w.basis(),
        }
    }
}

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-8;
    pub const POSITIVITY_TOL: f64 = 1e-8;

    /// Validated density matrix: Hermitian, unit trace, positive semidefinite.
    pub fn new(matrix: DMatrix<C64>, basis: Basis) -> Result<Self> {
        let rho = Self::new_unchecked(matrix, basis)?;
        let herm = rho.hermiticity_deviation();
        if herm > Self::HERMITIAN_TOL {
            return invalid(format!("density matrix not Hermitian (deviation {herm:.3e})"));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > Self::TRACE_TOL {
            return invalid(format!("density matrix trace is {tr}"));
        }
        let min = rho.min_eigenvalue();
        if !(min >= -Self::POSITIVITY_TOL) {
            return invalid(format!("density matrix has eigenvalue {min:.3e}"));
        }
        Ok(rho)
    }

    pub(crate) fn new_unchecked(matrix: DMatrix<C64>, basis: Basis) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return invalid(format!("density matrix is {}x{}, basis dimension {}", matrix.nrows(), matrix.ncols(), basis.dim()));
        }
        Ok(DensityMatrix { matrix, basis })
    }

    pub fn ground(basis: Basis) -> Self {
        Self::basis_projector(basis, basis.ground_index())
    }

    pub fn basis_projector(basis: Basis, index: usize) -> Self {
        let d = basis.dim();
        let mut m = DMatrix::zeros(d, d);
        m[(index, index)] = C64::new(1.0, 0.0);
        DensityMatrix { matrix: m, basis }
    }

    pub fn maximally_mixed(basis: Basis) -> Self {
        let d = basis.dim();
        DensityMatrix { matrix: DMatrix::identity(d, d) / C64::new(d as f64, 0.0), basis }
    }

    /// |ψ⟩⟨ψ| without renormalization.
    pub fn from_pure(psi: &WavePacket) -> Self {
        let a = psi.amplitudes();
        DensityMatrix { matrix: a * a.adjoint(), basis: *psi.basis() }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_anti_hermitian(&self.matrix)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&self.matrix)
    }

    pub fn population(&self, index: usize) -> f64 {
        self.matrix[(index, index)].re
    }
}

/// Smallest eigenvalue of the Hermitian part of `m`.
///
/// Entries below 1e-30 of the largest are zeroed first, which moves eigenvalues
/// by at most `dim · 1e-30`. Without this the symmetric QR iteration can
/// underflow to NaN on matrices whose entries span hundreds of decades.
pub(crate) fn min_hermitian_eigenvalue(m: &DMatrix<C64>) -> f64 {
    let mut herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let top = herm.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = 1e-30 * top;
    herm.iter_mut().filter(|z| z.norm() < floor).for_each(|z| *z = C64::new(0.0, 0.0));
    let eig = herm.symmetric_eigenvalues();
    if eig.iter().any(|x| !x.is_finite()) {
        return f64::NAN;
    }
    eig.iter().cloned().fold(f64::INFINITY, f64::min)
}

impl WavePacket {
    pub fn new(amplitudes: DVector<C64>, basis: Basis) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return invalid(format!("wave packet has {} amplitudes, basis dimension {}", amplitudes.len(), basis.dim()));
        }
        Ok(WavePacket { amplitudes, basis })
    }

    pub fn basis_state(basis: Basis, s: usize, q: &[u8]) -> Result<Self> {
        let idx = basis.index(s, q)?;
        let mut a = DVector::zeros(basis.dim());
        a[idx] = C64::new(1.0, 0.0);
        Ok(WavePacket { amplitudes: a, basis })
    }

    pub fn ground(basis: Basis) -> Self {
        let mut a = DVector::zeros(basis.dim());
        a[basis.ground_index()] = C64::new(1.0, 0.0);
        WavePacket { amplitudes: a, basis }
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// ⟨Ψ|Ψ⟩
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let b = Basis::new(1, 3).unwrap();
        assert!(DensityMatrix::new(DensityMatrix::ground(b).matrix().clone(), b).is_ok());
        let mut m = DMatrix::zeros(6, 6);
        m[(0, 0)] = C64::new(1.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(m, b).is_err());
        let mut m = DMatrix::zeros(6, 6);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m, b).is_err());
        assert!(DensityMatrix::new(DMatrix::zeros(3, 3), b).is_err());
    }

    #[test]
    fn pure_projector() {
        let b = Basis::new(2, 2).unwrap();
        let psi = WavePacket::basis_state(b, 0, &[1, 0]).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        assert_eq!(rho.trace(), 1.0);
        assert_eq!(rho.population(2), 1.0);
        assert!(rho.min_eigenvalue().abs() < 1e-12);
    }
}
