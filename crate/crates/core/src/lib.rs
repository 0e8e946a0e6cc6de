//! Noiseless linear amplification of optical states by photon addition and
//! subtraction, simulated in a truncated Fock basis.

pub mod amplifier;
pub mod crossover;
pub mod error;
pub mod fock;
pub mod metrics;
pub mod optimize;
pub mod scs;
pub mod squeezed;
pub mod verify;
pub mod wigner;

pub use error::{Error, Result};
