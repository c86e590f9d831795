use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("multiplicities sum to {sum}, matrix size is {size}")]
    PartitionSizeMismatch { sum: usize, size: usize },
    #[error("scheme points do not match the poles: {0}")]
    PointMismatch(String),
    #[error("no Riemann scheme available: {0}")]
    SchemeUnavailable(String),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("pole {0} already present")]
    DuplicatePole(String),
    #[error("scheme cannot be normalized: {0}")]
    NotNormalizable(String),
    #[error("tuple is not irreducible")]
    NotIrreducible,
    #[error("not convertible to Okubo normal form: {0}")]
    NotOkuboConvertible(String),
    #[error("eigenvalue collision: {0}")]
    EigenvalueCollision(String),
    #[error("Okubo normal form conditions fail: {0}")]
    ConditionsFail(String),
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("rho1 * rho2 must be nonzero")]
    ZeroRho,
    #[error("degenerate extension: (A-rho1)(A-rho2) = 0")]
    DegenerateExtension,
    #[error("A does not satisfy (A-mu1)(A-mu2) = 0")]
    NotQ2,
    #[error("mu1+mu2 = {0} is an eigenvalue of the removed block")]
    CRViolated(String),
    #[error("parameter is not generic: {0}")]
    NotGeneric(String),
    #[error("scheme is not in Okubo shape: {0}")]
    NotONFShape(String),
    #[error("columns have different totals: {0:?}")]
    InconsistentColumns(Vec<usize>),
    #[error("reduction produces a negative part at point {0}")]
    NegativePart(usize),
    #[error("precondition failed: {0}")]
    PreconditionFail(String),
}

pub type Result<T> = std::result::Result<T, Error>;
