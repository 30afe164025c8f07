use serde::Serialize;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ALL_FAILED: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] loxo_core::Error),
    #[error("{message}")]
    Usage { field: String, message: String },
    #[error("config file {path}: {message}")]
    Config { path: String, message: String },
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Usage {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                loxo_core::Error::Domain { .. } => "domain",
                loxo_core::Error::Quadrature { .. } => "quadrature",
                loxo_core::Error::Singular { .. } => "singular",
                loxo_core::Error::UnsupportedProjection { .. } => "unsupported-projection",
                loxo_core::Error::ChartMismatch { .. } => "chart-mismatch",
                loxo_core::Error::Precondition(_) => "precondition",
            },
            CliError::Usage { .. } => "usage",
            CliError::Config { .. } => "config",
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => "io",
        }
    }

    pub fn record(&self) -> Record {
        let field = match self {
            CliError::Core(e) => e.field().map(str::to_string),
            CliError::Usage { field, .. } => (!field.is_empty()).then(|| field.clone()),
            CliError::Config { .. } => Some("config".to_string()),
            _ => None,
        };
        Record {
            code: self.code().to_string(),
            field,
            message: self.to_string(),
        }
    }
}

/// Machine-readable error or warning, one JSON object per line on stderr.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub code: String,
    pub field: Option<String>,
    pub message: String,
}

impl Record {
    pub fn emit(&self) {
        // serializing three strings cannot fail
        eprintln!(
            "{}",
            serde_json::to_string(self).expect("record serializes")
        );
    }
}
