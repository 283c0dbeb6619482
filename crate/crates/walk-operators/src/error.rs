use thiserror::Error;

/// Errors from operator construction and spectral analysis.
#[derive(Debug, Error)]
pub enum WalkError {
    #[error(transparent)]
    Markov(#[from] qmh_markov::MarkovError),
    #[error(transparent)]
    Sim(#[from] qmh_sim::SimError),
    #[error(transparent)]
    Build(#[from] qmh_circuits::BuildError),
    #[error("matrix is not symmetric (deviation {0:e}); hermitianize it first")]
    NotSymmetric(f64),
    #[error("operator norm {0} exceeds 1; rescale before encoding")]
    NormTooLarge(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("operation needs a circuit-backed operator")]
    NotCircuit,
    #[error("dimension {dim} exceeds the dense cap {cap}; use a reduced instance")]
    DenseCap { dim: usize, cap: usize },
    #[error("subspace is not invariant (residual {0:e})")]
    NotInvariant(f64),
    #[error("invariant subspace exceeds {0} dimensions")]
    SubspaceTooLarge(usize),
    #[error("penalty phase {0} outside [0, 2π)")]
    Varphi(f64),
    #[error("layout must have an empty phase register")]
    PhaseRegister,
}
