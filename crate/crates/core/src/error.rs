use thiserror::Error;

/// A (preparation, measurement) input pair.
pub type InputPair = (u8, u8);

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("correlation table is missing {} required pair(s): {}", .0.len(), fmt_pairs(.0))]
    MissingPairs(Vec<InputPair>),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid source model: {0}")]
    InvalidModel(String),

    #[error("no rounds were selected for key generation")]
    EmptyKeyPool,

    #[error("infeasible witness constraints: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

fn fmt_pairs(pairs: &[InputPair]) -> String {
    pairs
        .iter()
        .map(|(x, y)| format!("(x={x}, y={y})"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
