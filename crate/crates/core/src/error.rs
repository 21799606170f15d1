use thiserror::Error;

/// Errors raised by the embedding toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("out of bounds: {0}")]
    OutOfBounds(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("broken chains: {}", .0.join(", "))]
    BrokenChains(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}
