use qmh_filter::FilterError;
use qmh_walk::WalkError;
use thiserror::Error;

/// Errors surfaced by the command-line tool.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Markov(#[from] qmh_markov::MarkovError),
    #[error(transparent)]
    Build(#[from] qmh_circuits::BuildError),
    #[error(transparent)]
    Sim(#[from] qmh_sim::SimError),
    #[error(transparent)]
    Metric(#[from] qmh_metrics::MetricError),
    #[error("results file: {0}")]
    Results(String),
    #[error("{0} validation check(s) failed")]
    Validation(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit status: 2 validation failure, 3 resource cap,
    /// 4 empty postselection branch, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Filter(FilterError::Cap { .. })
            | CliError::Walk(WalkError::DenseCap { .. })
            | CliError::Sim(qmh_sim::SimError::CapExceeded { .. } | qmh_sim::SimError::DenseCap { .. })
            | CliError::Build(qmh_circuits::BuildError::QpeCap { .. }) => 3,
            CliError::Filter(FilterError::EmptyBranch(_)) | CliError::Sim(qmh_sim::SimError::EmptyBranch(_)) => 4,
            _ => 1,
        }
    }
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, CliError>;
