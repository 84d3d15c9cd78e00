use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid part {0}: every size must be at least 1")]
    InvalidPart(usize),

    #[error("bad prime {0}: {1}")]
    BadPrime(u64, &'static str),

    #[error("list {0:?} is not sorted in descending order")]
    NotSorted(Vec<usize>),

    #[error("length mismatch: {0} row sizes but {1} column sizes")]
    LengthMismatch(usize, usize),

    #[error("expected {expected} parameter values, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("spectrum does not split over the rationals: irreducible factor {0}")]
    NonSplitSpectrum(String),

    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("no closed-form criterion covers this pair ({0})")]
    CriterionUnavailable(String),

    #[error("criterion and randomized oracle disagree: theorem says {theorem}, oracle says {oracle}")]
    Disagreement { theorem: bool, oracle: bool },

    #[error("generic homomorphism has {0} unstructured cells")]
    UnstructuredCells(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Deserializes JSON, naming the offending field on failure.
pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Error::Parse(inner.to_string())
        } else {
            Error::Parse(format!("field {path}: {inner}"))
        }
    })
}
