//! Time propagation under the Lindblad and non-Hermitian backends.

mod propagate;
mod state;
mod steady;
mod trajectory;

pub use propagate::{
    lindblad_rhs, propagate_lindblad, propagate_nonhermitian, PropagationSpec, RecordSpec, SystemGenerator,
    DEFAULT_DT_FS, DEFAULT_T_END_FS, NEGATIVITY_LIMIT, NORM_GROWTH_LIMIT, TRACE_DRIFT_LIMIT,
};
pub(crate) use state::min_hermitian_eigenvalue;
pub use state::{DensityMatrix, QuantumState, WavePacket};
pub use steady::detect_steady_state;
pub use trajectory::{fmt_sig, SolverKind, Trajectory};
