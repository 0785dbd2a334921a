use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("duplicate group name '{0}'")]
    DuplicateName(String),
    #[error("unknown group '{0}'")]
    UnknownGroup(String),
    #[error("unknown check '{0}'")]
    UnknownCheck(String),
    #[error("bad catalog filter '{0}'")]
    BadFilter(String),
    #[error("time budget exhausted")]
    Budget,
    #[error(transparent)]
    Core(#[from] pgv_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
