use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parameters of the operands differ")]
    ParamsMismatch,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("modulus is not irreducible over F_{0}")]
    Reducible(u32),
    #[error("element code {0} out of range")]
    InvalidElement(u32),
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("structure polynomial expansion too large: {0}")]
    OverflowGuard(String),
    #[error("not a unit")]
    NotAUnit,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("insufficient precision: {0}")]
    PrecisionError(String),
    #[error("truncation too short: {0}")]
    TruncationTooShort(String),
    #[error("not a basis of the required discriminant")]
    NotABasis,
    #[error("enumeration guard exceeded: {0}")]
    SizeGuard(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("rank deficit at sampled point: {0}")]
    RankDeficit(String),
    #[error("invalid type: {0}")]
    TypeInvalid(String),
    #[error("map is not p-nilpotent")]
    NotNilpotent,
    #[error("submodule is not transversal to V")]
    NotTransversal,
    #[error("matrix is singular")]
    Singular,
    #[error("unsupported prime {0}")]
    UnsupportedP(u32),
    #[error("matrix is not in the parabolic subgroup")]
    NotInParabolic,
    #[error("lower right block is singular")]
    BlockSingular,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
