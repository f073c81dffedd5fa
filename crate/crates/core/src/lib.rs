//! Open-system dynamics of quantum dots coupled to a single lossy plasmon
//! mode, with two interchangeable backends: the Lindblad master equation for
//! the density matrix and a non-Hermitian Schrödinger equation for a single
//! wave packet.

pub mod drive;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod manifold;
pub mod model;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
