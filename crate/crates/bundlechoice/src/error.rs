use thiserror::Error;

/// Errors of the file, harness and command-line layer.
#[derive(Debug, Error)]
pub enum Error {
    /// An estimator or data-model error.
    #[error(transparent)]
    Core(#[from] bundlechoice_core::Error),
    /// Reading or writing a file failed.
    #[error("{path}: {source}")]
    Io {
        /// File involved.
        path: String,
        /// Cause.
        #[source]
        source: std::io::Error,
    },
    /// A CSV file could not be parsed or written.
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// A JSON file could not be parsed or written.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    /// Malformed file contents or arguments.
    #[error("{0}")]
    Format(String),
    /// Too many replications of a Monte Carlo batch failed.
    #[error("{failed} of {total} replications failed (limit {limit:.0}%); first failure: {}", .log.first().map(String::as_str).unwrap_or("none"))]
    Batch {
        /// Failed replications.
        failed: usize,
        /// Replications attempted.
        total: usize,
        /// Allowed failure share in percent.
        limit: f64,
        /// One line per failure: `replication <r>: <error>`.
        log: Vec<String>,
    },
}

impl Error {
    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }

    /// Process exit code: 2 for input problems, 3 for failed estimation,
    /// 4 for a failed batch.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(e) if !e.is_input_error() => 3,
            Error::Batch { .. } => 4,
            _ => 2,
        }
    }
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, Error>;
