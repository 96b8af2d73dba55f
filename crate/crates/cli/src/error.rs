use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },

    #[error(transparent)]
    Core(#[from] goodbsq_core::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("worker pool: {0}")]
    Pool(String),
}

pub fn invalid(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Invalid {
        field: field.to_string(),
        reason: reason.into(),
    }
}

impl CliError {
    /// 2 for anything the caller can fix in the config, 3 when the norm
    /// guard stopped an integration, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use goodbsq_core::Error as E;
        match self {
            CliError::Invalid { .. } => 2,
            CliError::Core(E::InvalidParameter { .. } | E::TruncationMismatch { .. } | E::TooFewPoints { .. }) => 2,
            CliError::Core(E::Instability { .. }) => 3,
            _ => 1,
        }
    }
}
