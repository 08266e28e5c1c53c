use thiserror::Error;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("total degree {ell} is odd; a perfect matching of half-edges does not exist")]
    OddTotalDegree { ell: u64 },
    #[error("invalid degree {degree}: {reason}")]
    InvalidDegree { degree: u64, reason: &'static str },
    #[error("instance too large: {what} is {value}, limit {limit}")]
    TooLarge {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("no half-edges on vertices of degree other than 2")]
    NoKernelHalfEdges,
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),
    #[error("bad interval [{lo}, {hi}]")]
    BadInterval { lo: f64, hi: f64 },
    #[error("{what} = {value} outside the valid range {range}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        range: &'static str,
    },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: u64, n: u64 },
    #[error("empty sample")]
    EmptySample,
    #[error("malformed matching: {0}")]
    MalformedMatching(&'static str),
}

impl Error {
    /// Stable name of the variant, used in structured CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::OddTotalDegree { .. } => "OddTotalDegree",
            Error::InvalidDegree { .. } => "InvalidDegree",
            Error::TooLarge { .. } => "TooLarge",
            Error::NoKernelHalfEdges => "NoKernelHalfEdges",
            Error::NonPositiveArgument(_) => "NonPositiveArgument",
            Error::BadInterval { .. } => "BadInterval",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::VertexOutOfRange { .. } => "VertexOutOfRange",
            Error::EmptySample => "EmptySample",
            Error::MalformedMatching(_) => "MalformedMatching",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
