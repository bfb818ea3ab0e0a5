//! Truncated two-mode Fock-space oracle.
//!
//! Builds the bare coordinate and momentum matrices, diagonalizes the coupled
//! Hamiltonian exactly, prepares the Bell-like states from its numerical ground
//! state and evolves them unitarily. Nothing here uses the closed-form
//! amplitudes, which is what makes it usable as a cross-check.

pub mod basis;
pub mod checks;
pub mod operator;
pub mod system;

pub use basis::{ladder_matrices, quadrature_matrices, TwoModeBasis};
pub use checks::{
    commutator_check, evolve_expectations, expectation_table_check, heisenberg_evolution_check, MomentumEvolution,
    OracleReport, ReportKind,
};
pub use operator::OperatorMatrix;
pub use system::{
    bell_vector, coupled_hamiltonian, coupled_hamiltonian_shifted_form, normal_mode_ladders, FockOracle,
    NormalModeLadders, Spectrum,
};

pub const DEFAULT_CUTOFF: usize = 12;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
