//! Quantum fluctuations of two position-coupled harmonic oscillators prepared
//! in the single-excitation Bell-like states `(|01> ± |10>)/√2`.
//!
//! [`analytic`] evaluates the closed-form normalized amplitudes and uncertainty
//! products; [`oracle`] recomputes them from first principles on a truncated
//! Fock space; [`sampler`] draws seeded realizations inside the fluctuation
//! envelope; [`cli`] drives everything from the command line.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod sampler;

pub use error::{Error, Result};
pub use model::{
    beat_frequency, beat_period, eta, mode_frequency, BellState, ModeIndex, OscillatorIndex, SystemParams,
};
