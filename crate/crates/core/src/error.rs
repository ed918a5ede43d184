use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ParseError at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("ParseError: row {row} has {found} fields, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("TooShort: series has {len} observations, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("DomainError: {0}")]
    Domain(String),

    #[error("DegenerateData: {0}")]
    Degenerate(String),

    #[error("NumericalError: {0}")]
    Numerical(String),

    #[error("UnstableModel: spectral radius {radius:.6} >= 1; refit with the Yule-Walker estimator")]
    UnstableModel { radius: f64 },

    #[error("bootstrap replicate {index} failed: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// The innermost error, looking through replicate wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Replicate { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code used by the command-line tool.
    ///
    /// 3 for problems with the input data, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Parse { .. }
            | Error::Ragged { .. }
            | Error::TooShort { .. }
            | Error::Domain(_)
            | Error::Degenerate(_)
            | Error::Io(_) => 3,
            Error::Numerical(_) | Error::UnstableModel { .. } => 4,
            Error::Replicate { .. } => unreachable!("root() unwraps replicate errors"),
        }
    }
}
