use thiserror::Error;

/// Every failure the library can report.
///
/// Positions carried by variants are 1-based, matching how matrices are
/// usually written down.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("modulus has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("field too large: p^k must stay below 2^31")]
    FieldTooLargeForEncoding,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element code {0} is outside the field")]
    ElementOutOfRange(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("substitution scale must be nonzero")]
    ZeroScale,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("polynomial is not monic and nonconstant")]
    NotMonic,
    #[error("empty block list")]
    EmptyBlockList,
    #[error("entry ({row},{col}) breaks the unit-subdiagonal Hessenberg shape")]
    NotUnitSubdiagonalHessenberg { row: usize, col: usize },
    #[error("matrices are not similar")]
    NotSimilar,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("size constraint violated: {0}")]
    SizeConstraintViolated(String),
    #[error("gadget verification failed: {0}")]
    GadgetVerificationFailed(String),
    #[error("structure outside the constructive family: {0}")]
    UnsupportedStructure(String),
    #[error("trace of the target polynomial does not match")]
    TraceMismatch,
    #[error("linear system has no solution")]
    InconsistentSystem,
    #[error("free position ({row},{col}) is not strictly above the diagonal")]
    BadFreePosition { row: usize, col: usize },
    #[error("matrix is not cyclic")]
    NotCyclic,
    #[error("trace is not in the prime subfield")]
    TraceNotInPrimeField,
    #[error("matrix size {0} is too small for this pipeline")]
    SizeTooSmall(usize),
    #[error("field has more than three elements")]
    FieldTooLarge,
    #[error("characteristic {0} is not supported by this pipeline")]
    WrongCharacteristic(u64),
    #[error("generators are not coprime")]
    NotCoprime,
    #[error("empty generator list")]
    EmptyList,
    #[error("{0} is not representable")]
    NoRepresentation(u64),
    #[error("field is not a prime field")]
    NotPrimeField,
    #[error("size {n} is below the threshold {threshold}")]
    BelowThreshold { n: usize, threshold: usize },
    #[error("r = {r} outside [{lo}, {hi}]")]
    RangeViolation { r: i64, lo: i64, hi: i64 },
    #[error("last block must have degree at least 2")]
    LastBlockTooSmall,
    #[error("polynomial degree must be at least 2")]
    DegreeTooSmall,
    #[error("sign patterns conflict at slot {0}")]
    SignPatternConflict(usize),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("cap {0} is too low")]
    CapTooLow(usize),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal verification failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            NotPrime(_) => "NotPrime",
            ReducibleModulus(_) => "ReducibleModulus",
            DegreeMismatch { .. } => "DegreeMismatch",
            FieldTooLargeForEncoding => "FieldTooLargeForEncoding",
            DivisionByZero => "DivisionByZero",
            FieldMismatch => "FieldMismatch",
            ElementOutOfRange(_) => "ElementOutOfRange",
            ZeroPolynomial => "ZeroPolynomial",
            ZeroScale => "ZeroScale",
            ShapeMismatch(_) => "ShapeMismatch",
            NotSquare { .. } => "NotSquare",
            NotMonic => "NotMonic",
            EmptyBlockList => "EmptyBlockList",
            NotUnitSubdiagonalHessenberg { .. } => "NotUnitSubdiagonalHessenberg",
            NotSimilar => "NotSimilar",
            NotNilpotent => "NotNilpotent",
            SizeConstraintViolated(_) => "SizeConstraintViolated",
            GadgetVerificationFailed(_) => "GadgetVerificationFailed",
            UnsupportedStructure(_) => "UnsupportedStructure",
            TraceMismatch => "TraceMismatch",
            InconsistentSystem => "InconsistentSystem",
            BadFreePosition { .. } => "NotHessenberg",
            NotCyclic => "NotCyclic",
            TraceNotInPrimeField => "TraceNotInPrimeField",
            SizeTooSmall(_) => "SizeTooSmall",
            FieldTooLarge => "FieldTooLarge",
            WrongCharacteristic(_) => "WrongCharacteristic",
            NotCoprime => "NotCoprime",
            EmptyList => "EmptyList",
            NoRepresentation(_) => "NoRepresentation",
            NotPrimeField => "NotPrimeField",
            BelowThreshold { .. } => "BelowThreshold",
            RangeViolation { .. } => "RangeViolation",
            LastBlockTooSmall => "LastBlockTooSmall",
            DegreeTooSmall => "DegreeTooSmall",
            SignPatternConflict(_) => "SignPatternConflict",
            BudgetExceeded(_) => "BudgetExceeded",
            CapTooLow(_) => "CapTooLow",
            UnknownSuite(_) => "UnknownSuite",
            Parse(_) => "Parse",
            Internal(_) => "Internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
