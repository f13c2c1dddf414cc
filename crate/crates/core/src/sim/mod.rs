//! Quantum simulation oracle.
//!
//! Produces correlation tables from explicit states and measurements, and
//! exposes the intermediate objects that appear in the derivation of the
//! certifier's bounds: Schmidt spectra, the conditional states
//! `ρ_yb = D N*_yb D / p(b|y)`, fidelities, and entropies. Everything is dense
//! and intended for local dimensions up to about 16.

pub mod json;
pub mod linalg;
mod povm;
mod random;
mod simulate;
mod state;

pub use linalg::{CMatrix, CVector};
pub use povm::{pauli, Povm};
pub use random::{
    random_density, random_instance, random_instance_with_rank, random_mixed_instance, random_povm,
    random_pure_state, Rng,
};
pub use simulate::{
    dual_path_deviation, fidelity, rho_yb, schmidt_trace_table, simulate, simulate_mixed,
    simulate_pure, tensor_expectation_table, trace_overlap, ExperimentSpec, SchmidtFrame,
    SharedState,
};
pub use state::{
    compress_bob, entropies, renyi_entropy, von_neumann_entropy, Entropies, MixedState, PureState,
    Purification, SchmidtDecomposition, SchmidtSpectrum,
};

use crate::table::TableError;

/// Deviation cap for Hermiticity, PSD-ness, normalization of states and effects.
pub const OPERATOR_TOL: f64 = 1e-10;

/// Frobenius-norm tolerance for pure-state amplitudes.
pub const STATE_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("conditioning outcome has probability {0}, too small to condition on")]
    ZeroMarginal(f64),
    #[error("Rényi order must be positive, got {0}")]
    InvalidOrder(f64),
    #[error("simulation paths disagree by {0}")]
    PathDisagreement(f64),
    #[error(transparent)]
    Table(#[from] TableError),
}
