//! Hilbert space, parameters and operator construction.

mod basis;
mod operators;
mod params;
pub mod sparse;

pub use basis::{build_basis, Basis, BasisState};
pub use operators::{
    bare_hamiltonian, build_collapse_operators, build_effective_hamiltonian, build_system_hamiltonian,
    collapse_rate_operator, convert_cross_section, dipole_operator, dot_lowering, dot_number,
    plasmon_annihilation, plasmon_number, OperatorMatrix,
};
pub(crate) use operators::max_anti_hermitian;
pub use params::ParameterSet;
pub use sparse::SparseOp;
