use std::path::PathBuf;

use latcount_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    /// A polytope specification that fails validation; `field` locates the
    /// offending entry, e.g. `axes[1]`.
    #[error("polytope spec, {field}: {message}")]
    Spec { field: String, message: String },
    #[error("polytope spec is not valid JSON (line {line}, column {column}): {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn spec(field: impl Into<String>, message: impl ToString) -> Self {
        Self::Spec {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for bad input, 3 when the scan budget runs out,
    /// 4 for inadmissible dilations, 1 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(CoreError::BudgetExceeded { .. }) => 3,
            Self::Core(CoreError::Inadmissible(_) | CoreError::InterpolationDegenerate(_)) => 4,
            Self::Io { .. } | Self::Csv(_) => 1,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
