use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] almost2_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("cannot merge: {0}")]
    Merge(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(e) => e.kind(),
            Error::Io(_) => "Io",
            Error::Parse { .. } => "Parse",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
            Error::Config(_) => "Config",
            Error::Merge(_) => "Merge",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
