use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] k3e_core::error::Error),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("bad argument: {0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn malformed(what: impl Into<String>) -> CliError {
    CliError::Json(what.into())
}
