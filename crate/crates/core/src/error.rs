use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime (got {0})")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound 2^20")]
    ModulusTooLarge(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus polynomial is not irreducible over F_{p}")]
    NotIrreducible { p: u32 },
    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("generator {0} is singular")]
    SingularGenerator(String),
    #[error("group closure exceeded {0} elements")]
    ClosureBudgetExceeded(usize),
    #[error("no rotation of order p+1 found for p = {p}, lambda = {lambda}")]
    NoGeneratorFound { p: u32, lambda: u32 },
    #[error("p = {p} exceeds the limit {max} for this operation")]
    PrimeTooLarge { p: u32, max: u32 },
    #[error("exact leading-term determinant is only supported for p = 3 (got {0})")]
    PrimeTooLargeForExact(u32),
    #[error("subgroup is not contained in the group")]
    NotASubgroup,
    #[error("group order {order} is divisible by p = {p}")]
    ModularOrder { p: u32, order: usize },
    #[error("subgroup index {index} is divisible by p = {p}")]
    ModularIndex { p: u32, index: usize },
    #[error("polynomial is not invariant under the subgroup")]
    NotHInvariant,
    #[error("denominator must have constant term ±1")]
    BadDenominator,
    #[error("negative coefficient {value} at t^{degree}")]
    NegativeCoefficient { degree: usize, value: i128 },
    #[error("generator `{0}` is not invariant")]
    NotInvariantGenerator(String),
    #[error("`{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("relation `{0}` does not vanish")]
    RelationFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
