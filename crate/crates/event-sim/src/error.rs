use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Ring(#[from] ring_model::RingError),

    #[error("tag file error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
}
