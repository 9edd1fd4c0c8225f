use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("excitation ledger violated: {0}")]
    Ledger(qpulse_core::Error),
    #[error("solver failure: {0}")]
    Solver(qpulse_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<qpulse_core::Error> for CliError {
    fn from(e: qpulse_core::Error) -> Self {
        match e {
            qpulse_core::Error::LedgerViolation { .. } => Self::Ledger(e),
            qpulse_core::Error::InvalidParameter { field, reason } => {
                Self::Validation(vec![format!("{field}: {reason}")])
            }
            other => Self::Solver(other),
        }
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Parse(_) => "parse",
            Self::Validation(_) => "validation",
            Self::Ledger(_) => "ledger",
            Self::Solver(_) => "solver",
            Self::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) => 1,
            Self::Parse(_) | Self::Validation(_) => 2,
            Self::Solver(_) => 3,
            Self::Ledger(_) => 4,
        }
    }

    /// Single-line JSON record written to stderr on failure.
    pub fn record(&self) -> String {
        let details: Vec<String> = match self {
            Self::Validation(v) => v.clone(),
            _ => Vec::new(),
        };
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "details": details,
                "exit_code": self.exit_code(),
            }
        })
        .to_string()
    }
}
