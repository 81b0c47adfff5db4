use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported Schatten exponent p = {0} (need 1 < p <= inf)")]
    UnsupportedExponent(f64),
    #[error("matrix outside the log series domain: ||u - 1|| = {distance:.3e} >= 1")]
    OutsideLogDomain { distance: f64 },
    #[error("matrix is not unitary: ||u*u - 1|| = {defect:.3e}")]
    NotUnitary { defect: f64 },
    #[error("eigenvalue within {distance:.3e} of -1; principal logarithm is ambiguous")]
    BranchCut { distance: f64 },
    #[error("matrix is not invertible (smallest singular value {smallest:.3e})")]
    NotInvertible { smallest: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("group model {0} has no normal form")]
    NoNormalForm(String),
    #[error("group model mismatch: {0} vs {1}")]
    ModelMismatch(String, String),
    #[error("generator index {index} out of range for {model}")]
    InvalidGenerator { index: usize, model: String },
    #[error("surface genus must be at least 2, got {0}")]
    InvalidGenus(usize),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("product of commutators is not the identity")]
    NotARelator,
    #[error("path segment still outside the log domain after {depth} subdivisions")]
    PathTooCoarse { depth: usize },
    #[error("path endpoint is {distance:.3e} away from the target")]
    EndpointMismatch { distance: f64 },
    #[error("defect too large for the logarithm: ||d - 1|| = {distance:.3e}")]
    DefectTooLarge { distance: f64 },
    #[error("commutator product has an eigenvalue at -1 ({distance:.3e} away); refusing to pick a branch")]
    AmbiguousBranch { distance: f64 },
    #[error("amplification does not preserve the unnormalized trace")]
    TraceNotPreserved,
    #[error("bar pairing {termwise} disagrees with product-of-defects log {product} by {gap:.3e}")]
    CrossCheckFailed {
        termwise: String,
        product: String,
        gap: f64,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
