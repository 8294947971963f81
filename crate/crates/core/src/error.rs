use thiserror::Error;

/// Errors raised by the dispatch model, geometry, and optimizers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    Dimension {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid feasible operating region: {0}")]
    Region(String),

    #[error("invalid system definition at `{field}`: {reason}")]
    System { field: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("malformed system file: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn system(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::System {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
        if expected == actual {
            Ok(())
        } else {
            Err(Error::Dimension {
                what,
                expected,
                actual,
            })
        }
    }
}
