use thiserror::Error;

/// Exit code 2: the inputs were rejected before any computation ran.
/// Exit code 3: a computation or analysis step failed.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("config range error at {key}: {message}")]
    Range { key: String, message: String },

    #[error("invalid argument: {0}")]
    BadArgument(String),

    #[error("cannot read {path}: {source}")]
    ReadInput { path: String, source: std::io::Error },

    #[error(transparent)]
    Ring(#[from] ring_model::RingError),

    #[error(transparent)]
    Sim(#[from] event_sim::SimError),

    #[error(transparent)]
    Analyzer(#[from] tia_analyzer::AnalyzerError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for validation problems, 3 for analysis/runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. }
            | CliError::Range { .. }
            | CliError::BadArgument(_)
            | CliError::ReadInput { .. }
            | CliError::Ring(_) => 2,
            CliError::Sim(event_sim::SimError::Config(_)) => 2,
            _ => 3,
        }
    }
}
