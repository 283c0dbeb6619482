use thiserror::Error;

/// Errors raised while building or analysing Markov chains.
#[derive(Debug, Error)]
pub enum MarkovError {
    #[error("grid side {0} must be a power of two and at least 2")]
    GridSide(usize),
    #[error("Ising chain needs at least 2 spins, got {0}")]
    SpinCount(usize),
    #[error("inverse temperature must be positive and finite, got {0}")]
    Beta(f64),
    #[error("states {0} and {1} are not neighbours")]
    NotNeighbours(usize, usize),
    #[error("distribution has a non-positive entry at state {0}")]
    NonPositive(usize),
    #[error("kernel is not reversible with respect to the given distribution (violation {0:e})")]
    NotReversible(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o failed: {0}")]
    Io(#[from] std::io::Error),
}
