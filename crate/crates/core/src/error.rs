use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("complex invariant violated at generator `{generator}`: {reason}")]
    Complex { generator: String, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn complex(generator: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Complex { generator: generator.into(), reason: reason.into() }
    }
}
