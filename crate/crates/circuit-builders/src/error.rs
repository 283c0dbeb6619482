use thiserror::Error;

/// Errors raised while building circuits.
#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Sim(#[from] qmh_sim::SimError),
    #[error("layout is missing register `{0}`")]
    MissingRegister(&'static str),
    #[error("coin width must be log2 of the neighbour count ({0} neighbours)")]
    CoinWidth(usize),
    #[error("instance kind does not match this oracle")]
    WrongInstance,
    #[error("acceptance probability {0} outside [0, 1]")]
    Acceptance(f64),
    #[error("phase estimation needs {needed} qubits, above the cap of {cap}; use semiclassical mode")]
    QpeCap { needed: usize, cap: usize },
    #[error("phase estimation needs at least one phase qubit")]
    Precision,
}
