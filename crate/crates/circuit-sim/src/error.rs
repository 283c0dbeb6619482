use thiserror::Error;

/// Errors raised by layouts, gates and simulation.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("register `{0}` declared twice")]
    DuplicateRegister(String),
    #[error("register `{0}` not in layout")]
    UnknownRegister(String),
    #[error("layout needs {needed} qubits, above the simulation cap of {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitRange { index: usize, qubits: usize },
    #[error("gate uses qubit {0} both as target and control (or twice)")]
    Overlap(usize),
    #[error("gate angle is not finite")]
    Angle,
    #[error("circuit acts on {circuit} qubits but the state has {state}")]
    Width { circuit: usize, state: usize },
    #[error("postselection branch is empty (probability {0:e})")]
    EmptyBranch(f64),
    #[error("dense matrix of dimension {dim} exceeds the cap {cap}")]
    DenseCap { dim: usize, cap: usize },
    #[error("bad statevector dump: {0}")]
    Dump(String),
    #[error("i/o failed: {0}")]
    Io(#[from] std::io::Error),
}
