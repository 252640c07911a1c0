use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("pivot variable `{0}` is not free in the substituted formula")]
    PivotNotFree(String),
    #[error("scheme predicate P survived substitution")]
    PStillPresent,
    #[error("depth must be at least 1")]
    InvalidDepth,
    #[error("arity must be at least 1")]
    InvalidArity,
    #[error("signature clash on `{0}`")]
    SignatureClash(String),
    #[error("symbol clash on `{0}`")]
    SymbolClash(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("ill-formed: {0}")]
    IllFormed(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("not a congruence: {0}")]
    NotCongruence(String),
    #[error("interpreted domain is empty")]
    EmptyDomain,
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("height ordering ill-formed: {0}")]
    HeightIllFormed(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
