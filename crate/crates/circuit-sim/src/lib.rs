//! Exact statevector simulation over named multi-register qubit layouts.
//!
//! Two amplitude stores share one gate set and one kernel compiler:
//! [`Statevector`] is a contiguous `2^n` array whose kernels visit only the
//! control-satisfying subspace (data-parallel with the `parallel` feature),
//! and [`SparseState`] keeps only nonzero amplitudes. Both implement
//! [`QuantumState`].
//!
//! Basis index bit `q` is qubit `q`; qubits follow register declaration
//! order, least significant bit first within a register.

pub mod compile;
mod dense;
mod dump;
mod error;
mod gate;
mod layout;
mod matrix;
pub mod par;
mod sparse;
mod state;

pub use compile::CompiledCircuit;
pub use dense::Statevector;
pub use dump::{read_dump, write_dump};
pub use error::SimError;
pub use gate::{Circuit, Control, Gate, GateKind};
pub use layout::{Register, RegisterLayout, DEFAULT_SIM_CAP};
pub use matrix::{circuit_to_matrix, DEFAULT_DENSE_CAP};
pub use sparse::SparseState;
pub use state::{apply_gate, marginal_distribution, postselect, run, QuantumState, MIN_BRANCH_PROB};

/// Complex amplitude type.
pub type C64 = num_complex::Complex64;

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, SimError>;
