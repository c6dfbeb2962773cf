use std::path::PathBuf;

use optham::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("bad configuration: {0}")]
    BadConfig(String),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {source}")]
    Format {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{failed} of {total} verification claims failed")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::BadConfig(_) => 2,
            CliError::Io { .. }
            | CliError::Format { .. }
            | CliError::Csv(_)
            | CliError::Json(_) => 3,
            CliError::Core(e) => match e {
                CoreError::NonNormalized { .. }
                | CoreError::NotMixed
                | CoreError::InfiniteEntropy { .. }
                | CoreError::InvalidSpectrum(_)
                | CoreError::IndexBeyondRank { .. }
                | CoreError::BeyondResolution { .. } => 10,
                CoreError::InvalidParameter(_) | CoreError::OutOfRange { .. } => 11,
                CoreError::InvalidLevels(_) | CoreError::NoConvergenceCertificate { .. } => 12,
                CoreError::NoGibbsState { .. } => 13,
                CoreError::DegenerateBeta { .. } => 14,
                CoreError::SamplingExhausted { .. } => 15,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
