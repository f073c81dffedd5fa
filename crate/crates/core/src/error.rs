use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A propagation left the physically admissible region (trace drift,
    /// negative eigenvalue, norm growth).
    #[error("propagation diagnostic at t = {time_fs} fs: {message}")]
    PropagationDiagnostic { time_fs: f64, message: String },

    /// The dipole signal was still ringing at the end of the propagation.
    #[error(
        "insufficient propagation: |<mu>| tail {tail:.3e} exceeds {floor:.1e} of peak {peak:.3e}"
    )]
    InsufficientPropagation { tail: f64, peak: f64, floor: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
