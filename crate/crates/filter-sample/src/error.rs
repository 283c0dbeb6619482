use thiserror::Error;

/// Errors raised by the filter and the sampling pipeline.
#[derive(Debug, Error)]
pub enum FilterError {
    #[error(transparent)]
    Markov(#[from] qmh_markov::MarkovError),
    #[error(transparent)]
    Sim(qmh_sim::SimError),
    #[error(transparent)]
    Build(qmh_circuits::BuildError),
    #[error(transparent)]
    Walk(qmh_walk::WalkError),
    #[error("precision must be at least one qubit")]
    Precision,
    #[error("penalty phase {0} outside [0, 2π)")]
    Varphi(f64),
    #[error("spectral gap {0} outside (0, 1]")]
    Gap(f64),
    #[error("{needed} qubits exceed the cap of {cap}; use semiclassical or oracle mode")]
    Cap { needed: usize, cap: usize },
    #[error("postselection branch is empty (probability {0:e})")]
    EmptyBranch(f64),
    #[error("unknown filter mode `{0}`")]
    Mode(String),
}

impl From<qmh_sim::SimError> for FilterError {
    fn from(e: qmh_sim::SimError) -> Self {
        match e {
            qmh_sim::SimError::EmptyBranch(p) => FilterError::EmptyBranch(p),
            qmh_sim::SimError::CapExceeded { needed, cap } => FilterError::Cap { needed, cap },
            other => FilterError::Sim(other),
        }
    }
}

impl From<qmh_circuits::BuildError> for FilterError {
    fn from(e: qmh_circuits::BuildError) -> Self {
        match e {
            qmh_circuits::BuildError::QpeCap { needed, cap } => FilterError::Cap { needed, cap },
            qmh_circuits::BuildError::Sim(s) => s.into(),
            other => FilterError::Build(other),
        }
    }
}

impl From<qmh_walk::WalkError> for FilterError {
    fn from(e: qmh_walk::WalkError) -> Self {
        match e {
            qmh_walk::WalkError::Sim(s) => s.into(),
            qmh_walk::WalkError::Build(b) => b.into(),
            qmh_walk::WalkError::Markov(m) => FilterError::Markov(m),
            other => FilterError::Walk(other),
        }
    }
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, FilterError>;
