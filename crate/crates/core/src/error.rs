use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a complex: composition of consecutive differentials is nonzero")]
    NotAComplex,
    #[error("map does not commute with the differentials")]
    NotAChainMap,
    #[error("vector is not in the subspace")]
    NotInSubspace,
    #[error("matrix is singular")]
    Singular,
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error("invalid 3-form: {0}")]
    InvalidForm(String),
    #[error("no reduction available: {0}")]
    NoReduction(String),
    #[error("link is not homologically split: lk({0},{1}) = {2}")]
    NotSplit(usize, usize, i64),
    #[error("hyperbox relations fail at {} (vertex, direction) pair(s)", .0.len())]
    RelationFailure(Vec<crate::hypercube::Violation>),
    #[error("not a quasi-isomorphism: {0}")]
    NotQuasiIso(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("invalid knot complex: {0}")]
    InvalidKnot(String),
    #[error("invalid hypercube: {0}")]
    InvalidHypercube(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
