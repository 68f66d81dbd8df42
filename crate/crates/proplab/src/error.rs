use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid parameter `{name}`: {reason}")]
    Param { name: String, reason: String },
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
    #[error("function value {value} is not finite at eigenvalue {at}")]
    NonFinite { at: f64, value: f64 },
    #[error("continuation failed: {0}")]
    Continuation(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("evolution: {0}")]
    Evolution(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Param {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
