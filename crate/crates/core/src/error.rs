use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate observation for {ticker} on {date}")]
    DuplicateObservation { ticker: String, date: NaiveDate },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("insufficient data for {context}: need at least {required}, got {actual}")]
    InsufficientData {
        context: &'static str,
        required: usize,
        actual: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A return column with zero variance cannot be standardized.
    #[error("degenerate column {ticker}: zero variance")]
    DegenerateColumn { ticker: String },

    #[error("component {component} cannot be normalized: loading sum is zero")]
    NonNormalizable { component: usize },

    #[error("degenerate price range: max equals min ({value})")]
    DegenerateRange { value: f64 },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("training diverged at epoch {epoch}, batch {batch}: non-finite loss")]
    Divergence { epoch: usize, batch: usize },

    #[error("negative weight {weight} for {ticker}: short positions are not supported")]
    UnsupportedShort { ticker: String, weight: f64 },

    #[error("missing price for {ticker}")]
    MissingData { ticker: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by the numbers rather than by the input data.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Divergence { .. }
                | Error::DegenerateColumn { .. }
                | Error::NonNormalizable { .. }
                | Error::DegenerateRange { .. }
        )
    }
}
