use thiserror::Error;

/// Error type shared by all workbench modules.
#[derive(Error, Debug)]
pub enum CovqedError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("sizing error: {0}")]
    Sizing(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("recipe error: {0}")]
    Recipe(String),

    #[error("physicality error: {0}")]
    Physicality(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CovqedError {
    pub fn config(msg: impl Into<String>) -> Self {
        CovqedError::Config(msg.into())
    }
    pub fn sizing(msg: impl Into<String>) -> Self {
        CovqedError::Sizing(msg.into())
    }
    pub fn numerical(msg: impl Into<String>) -> Self {
        CovqedError::Numerical(msg.into())
    }
    pub fn recipe(msg: impl Into<String>) -> Self {
        CovqedError::Recipe(msg.into())
    }
    pub fn physicality(msg: impl Into<String>) -> Self {
        CovqedError::Physicality(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, CovqedError>;
