use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown generator `{name}`")]
    UnknownGenerator { name: String },
    #[error("generator index {index} outside 1..={d}")]
    GeneratorOutOfRange { index: usize, d: usize },
    #[error("element is the identity modulo S^({0}+1); it has no initial form")]
    IdentityElement(usize),
    #[error("coefficient ring Z/{p}^{exponent} does not fit in 62 bits")]
    ModulusTooLarge { p: u64, exponent: usize },

    #[error("degree {degree} outside 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("degree {degree} exceeds truncation {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("graded elements live over different contexts")]
    ContextMismatch,

    #[error("syntax error at {location}: {message}")]
    Syntax { location: String, message: String },
    #[error("p = {0} is not prime")]
    NonPrimeP(u64),
    #[error("truncation {0} is too small (need N >= 2)")]
    TruncationTooSmall(usize),
    #[error("presentation needs at least one generator")]
    NoGenerators,

    #[error("relator {index} is trivial modulo S^({truncation}+1); raise the truncation")]
    IdentityRelator { index: usize, truncation: usize },
    #[error(
        "chain R^(n,S) requested for n = {n} but truncation {truncation} leaves no degree above n"
    )]
    TruncationExhausted { n: usize, truncation: usize },
    #[error("a relator has weight 1, so R is not contained in S^(2)")]
    RelatorsOutsideFrattini,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("closure exceeded the cap of {cap} processed candidates")]
    ResourceCap { cap: usize },

    #[error("invalid field descriptor `{0}` (expected Fq:<prime power>)")]
    BadFieldDescriptor(String),
    #[error(
        "F_{q} lacks a primitive p-th root of unity ζ_p for p = {p} ({p} does not divide {q}-1)"
    )]
    NoRootOfUnity { q: u64, p: u64 },
    #[error("field enumeration needs q^p = {size} elements, above the cap {cap}")]
    FieldTooLarge { size: u64, cap: u64 },
    #[error("{0} is a p-th power; F(a^(1/p))/F is not an extension of degree p")]
    TrivialExtension(u64),
    #[error("enumeration stride {stride} is not coprime to {order}")]
    InvalidStride { stride: u64, order: u64 },
    #[error("Milnor degree must be >= 1")]
    ZeroMilnorDegree,
}
