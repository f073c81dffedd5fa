//! Operators on the truncated plasmon ⊗ dots space.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::basis::Basis;
use super::params::ParameterSet;
use super::sparse::SparseOp;
use crate::drive::DriveSpec;
use crate::error::{invalid, Result};
use crate::units::{CONSTANTS, HBAR_EV_FS};

const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex matrix tagged with the basis it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    matrix: DMatrix<C64>,
    basis: Basis,
    hermitian: bool,
}

impl OperatorMatrix {
    /// Wraps `matrix`; when `hermitian` is claimed it is checked to 1e-12.
    pub fn new(matrix: DMatrix<C64>, basis: Basis, hermitian: bool) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return invalid(format!(
                "operator is {}x{}, basis dimension is {}",
                matrix.nrows(),
                matrix.ncols(),
                basis.dim()
            ));
        }
        let op = OperatorMatrix { matrix, basis, hermitian };
        if hermitian && op.hermiticity_deviation() >= HERMITIAN_TOL {
            return invalid(format!(
                "operator flagged Hermitian deviates by {:.3e}",
                op.hermiticity_deviation()
            ));
        }
        Ok(op)
    }

    pub(crate) fn from_parts(matrix: DMatrix<C64>, basis: Basis, hermitian: bool) -> Self {
        OperatorMatrix { matrix, basis, hermitian }
    }

    pub fn zeros(basis: Basis) -> Self {
        let d = basis.dim();
        OperatorMatrix { matrix: DMatrix::zeros(d, d), basis, hermitian: true }
    }

    pub fn identity(basis: Basis) -> Self {
        let d = basis.dim();
        OperatorMatrix { matrix: DMatrix::identity(d, d), basis, hermitian: true }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn dagger(&self) -> OperatorMatrix {
        OperatorMatrix { matrix: self.matrix.adjoint(), basis: self.basis, hermitian: self.hermitian }
    }

    /// Largest entry of |M − M†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        max_anti_hermitian(&self.matrix)
    }

    pub fn to_sparse(&self) -> SparseOp {
        SparseOp::from_dense(&self.matrix)
    }

    pub(crate) fn mul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix { matrix: &self.matrix * &other.matrix, basis: self.basis, hermitian: false }
    }

    pub(crate) fn scaled(&self, s: f64) -> OperatorMatrix {
        OperatorMatrix { matrix: &self.matrix * C64::new(s, 0.0), basis: self.basis, hermitian: self.hermitian }
    }
}

pub(crate) fn max_anti_hermitian(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Bosonic annihilation operator b on the truncated ladder.
pub fn plasmon_annihilation(basis: &Basis) -> OperatorMatrix {
    let d = basis.dim();
    let block = basis.dot_block();
    let mut m = DMatrix::zeros(d, d);
    for col in block..d {
        let s = basis.plasmon_number(col);
        m[(col - block, col)] = real((s as f64).sqrt());
    }
    OperatorMatrix::from_parts(m, *basis, false)
}

/// Two-level lowering operator σ_j for dot `j` (1-based).
pub fn dot_lowering(basis: &Basis, j: usize) -> Result<OperatorMatrix> {
    basis.check_dot(j)?;
    let d = basis.dim();
    let mut m = DMatrix::zeros(d, d);
    for col in 0..d {
        if basis.dot_state(col, j) == 1 {
            m[(basis.flip_dot(col, j), col)] = real(1.0);
        }
    }
    Ok(OperatorMatrix::from_parts(m, *basis, false))
}

/// σ_j†σ_j, diagonal.
pub fn dot_number(basis: &Basis, j: usize) -> Result<OperatorMatrix> {
    basis.check_dot(j)?;
    let d = basis.dim();
    let m = DMatrix::from_fn(d, d, |r, c| if r == c { real(basis.dot_state(r, j) as f64) } else { real(0.0) });
    Ok(OperatorMatrix::from_parts(m, *basis, true))
}

/// b†b, diagonal.
pub fn plasmon_number(basis: &Basis) -> OperatorMatrix {
    let d = basis.dim();
    let m = DMatrix::from_fn(d, d, |r, c| if r == c { real(basis.plasmon_number(r) as f64) } else { real(0.0) });
    OperatorMatrix::from_parts(m, *basis, true)
}

fn check_consistent(params: &ParameterSet, basis: &Basis) -> Result<()> {
    if params.n_dots() != basis.n_dots() {
        return invalid(format!(
            "parameter set has {} couplings, basis has {} dots",
            params.n_dots(),
            basis.n_dots()
        ));
    }
    Ok(())
}

/// Dipole operator μ = d₀Σ(σ_j† + σ_j) + d_pl(b† + b), in Debye.
pub fn dipole_operator(params: &ParameterSet, basis: &Basis) -> Result<OperatorMatrix> {
    check_consistent(params, basis)?;
    let b = plasmon_annihilation(basis);
    let mut m = (b.matrix() + b.matrix().adjoint()) * real(params.d_pl);
    for j in 1..=basis.n_dots() {
        let s = dot_lowering(basis, j)?;
        m += (s.matrix() + s.matrix().adjoint()) * real(params.d0);
    }
    Ok(OperatorMatrix::from_parts(m, *basis, true))
}

/// Field-free part of H: ħω₀Σσ†σ + ħω_pl b†b + Σħg_j(σ_j b† + σ_j† b), eV.
pub fn bare_hamiltonian(params: &ParameterSet, basis: &Basis) -> Result<OperatorMatrix> {
    check_consistent(params, basis)?;
    let b = plasmon_annihilation(basis);
    let bd = b.dagger();
    let mut m = plasmon_number(basis).into_matrix() * real(params.omega_pl);
    for (idx, &g) in params.g.iter().enumerate() {
        let j = idx + 1;
        let s = dot_lowering(basis, j)?;
        let sd = s.dagger();
        m += dot_number(basis, j)?.into_matrix() * real(params.omega0);
        m += (bd.mul(&s).into_matrix() + sd.mul(&b).into_matrix()) * real(g);
    }
    Ok(OperatorMatrix::from_parts(m, *basis, true))
}

/// H(t) in eV, including −μE(t) when `include_drive` is set.
pub fn build_system_hamiltonian(
    params: &ParameterSet,
    basis: &Basis,
    t: f64,
    include_drive: bool,
) -> Result<OperatorMatrix> {
    let mut h = bare_hamiltonian(params, basis)?;
    if include_drive {
        let e = DriveSpec::from_params(params).field_at(t);
        if e != 0.0 {
            let mu = dipole_operator(params, basis)?;
            h.matrix -= mu.matrix() * real(e * CONSTANTS.debye_au_to_ev);
        }
    }
    Ok(h)
}

/// Collapse operators in fs^-1/2, ordered per dot j as √γ₁σ_j then
/// √(2γ₂*)σ_j†σ_j, followed by √γ_pl b.
pub fn build_collapse_operators(params: &ParameterSet, basis: &Basis) -> Result<Vec<OperatorMatrix>> {
    check_consistent(params, basis)?;
    for (name, r) in [("gamma1", params.gamma1), ("gamma2_star", params.gamma2_star), ("gamma_pl", params.gamma_pl)] {
        if !(r >= 0.0) {
            return invalid(format!("{name} must be >= 0, got {r}"));
        }
    }
    let mut ops = Vec::with_capacity(2 * basis.n_dots() + 1);
    for j in 1..=basis.n_dots() {
        ops.push(dot_lowering(basis, j)?.scaled((params.gamma1 / HBAR_EV_FS).sqrt()));
        ops.push(dot_number(basis, j)?.scaled((2.0 * params.gamma2_star / HBAR_EV_FS).sqrt()));
    }
    ops.push(plasmon_annihilation(basis).scaled((params.gamma_pl / HBAR_EV_FS).sqrt()));
    Ok(ops)
}

/// Σ_k C_k†C_k in fs^-1.
pub fn collapse_rate_operator(collapse: &[OperatorMatrix], basis: &Basis) -> OperatorMatrix {
    let d = basis.dim();
    let mut m = DMatrix::zeros(d, d);
    for c in collapse {
        m += c.matrix().adjoint() * c.matrix();
    }
    OperatorMatrix::from_parts(m, *basis, true)
}

/// H_c(t) = H(t) − (iħ/2)Σ_k C_k†C_k, eV.
pub fn build_effective_hamiltonian(
    params: &ParameterSet,
    basis: &Basis,
    t: f64,
    include_drive: bool,
) -> Result<OperatorMatrix> {
    let h = build_system_hamiltonian(params, basis, t, include_drive)?;
    let collapse = build_collapse_operators(params, basis)?;
    let loss = collapse_rate_operator(&collapse, basis);
    let m = h.matrix() - loss.matrix() * C64::new(0.0, HBAR_EV_FS / 2.0);
    Ok(OperatorMatrix::from_parts(m, *basis, false))
}

/// Absorption cross section in cm² from a polarizability in Debye per
/// atomic-unit field at photon energy `omega` (eV).
pub fn convert_cross_section(alpha_raw: C64, omega: f64, n_med: f64) -> f64 {
    let c = CONSTANTS;
    let alpha_si = alpha_raw.im * c.debye_to_cm / c.au_field_to_vpm;
    let w = c.ev_to_rad_per_s(omega);
    let sigma_m2 = n_med * w / (c.eps0 * c.c) * alpha_si;
    sigma_m2 * 1.0e4
}
