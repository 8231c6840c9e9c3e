use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// A file parsed but violates a structural invariant.
    #[error("invalid file: {0}")]
    Format(String),

    #[error("N = {n} exceeds the exhaustive-mapping limit of {max}")]
    Capacity { n: usize, max: usize },

    /// Some ordered pair of optima has no connecting path.
    #[error("network is not strongly connected: {0}")]
    Disconnected(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
