use thiserror::Error;

/// Errors raised by the library. Most variants describe malformed input;
/// `Internal` marks a broken invariant that valid input can never trigger.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not a prime below 2^31")]
    NonPrime(u64),
    #[error("unknown field tag {0:?} (expected \"Q\" or \"GF:p\")")]
    UnknownField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid scalar {0:?}")]
    InvalidScalar(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("relations are not admissible: path {path} of length {length} is nonzero")]
    NonAdmissible { path: String, length: usize },
    #[error("modules over different algebras")]
    AlgebraMismatch,
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("not a module homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("missing {0} decomposition metadata")]
    MissingMetadata(&'static str),
    #[error("not exact: {0}")]
    NotExact(String),
    #[error("not injective: {0}")]
    NotInjective(String),
    #[error("endomorphism ring is not certified local: {0}")]
    NotLocal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error in {location}: {message}")]
    Parse { location: String, message: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
