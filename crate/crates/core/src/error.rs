use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime greater than 3")]
    InvalidField(u64),
    #[error("operands belong to different fields (q = {0} vs q = {1})")]
    FieldMismatch(u64, u64),
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("constant polynomial not allowed here")]
    ConstantPolynomial,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation of zero is +infinity")]
    InfiniteValuation,
    #[error("{0} is not a monic irreducible polynomial")]
    NotAPlace(String),
    #[error("{0} is not square-free")]
    NotSquareFree(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular curve: discriminant vanishes")]
    SingularCurve,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point has order 2 (doubling gives the point at infinity)")]
    TwoTorsion,
    #[error("reduction at {0} is bad")]
    BadReduction(String),
    #[error("model is not minimal at {0}")]
    NotMinimal(String),
    #[error("isotrivial or constant curve: L-polynomial machinery unsupported")]
    IsotrivialUnsupported,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("conductor degree {0} too small for this bound")]
    DegenerateConductor(i64),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("statistic needs at least two non-torsion points")]
    EmptyStatistic,
    #[error("height computation did not converge: {0}")]
    NotConverged(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
