use thiserror::Error;

/// Errors raised by the algebraic pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MopError {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("insufficient coefficients: {what} needs index {needed}, have {available}")]
    InsufficientCoefficients { what: &'static str, needed: usize, available: usize },
    #[error("superdiagonal entry at row {row} is not 1")]
    NotMonicHessenberg { row: usize },
    #[error("zero pivot u_{0} in LU factorization")]
    ZeroPivot(usize),
    #[error("degenerate bidiagonal split: zero divisor for m^({j})_{n}")]
    DegenerateSplit { n: usize, j: usize },
    #[error("validation failure: {0}")]
    ValidationFailure(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("sequence is not {d}-symmetric: polynomial {n} has exponent {exponent}")]
    NotDSymmetric { d: usize, n: usize, exponent: usize },
    #[error("A^1_{0}(0) = 0")]
    ZeroConstantTerm(usize),
    #[error("moment u^{functional}(x^{power}) disagrees between block splits")]
    OverlapInconsistency { functional: usize, power: usize },
    #[error("insufficient horizon: need {needed}, usable {usable}")]
    InsufficientHorizon { needed: usize, usable: usize },
    #[error("insufficient moments: need power {needed}, table has {available}")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("|z| = {modulus} is not beyond the norm bound {bound}")]
    OutsideDomain { modulus: f64, bound: f64 },
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("insufficient blocks: need index {needed}, have {available}")]
    InsufficientBlocks { needed: usize, available: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl MopError {
    /// True for the mathematical degeneracies (as opposed to malformed input).
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            MopError::ZeroPivot(_)
                | MopError::DegenerateSplit { .. }
                | MopError::NotDSymmetric { .. }
                | MopError::ZeroConstantTerm(_)
                | MopError::OutsideDomain { .. }
        )
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            MopError::SizeMismatch { .. } => "SizeMismatch",
            MopError::InsufficientCoefficients { .. } => "InsufficientCoefficients",
            MopError::NotMonicHessenberg { .. } => "NotMonicHessenberg",
            MopError::ZeroPivot(_) => "ZeroPivot",
            MopError::DegenerateSplit { .. } => "DegenerateSplit",
            MopError::ValidationFailure(_) => "ValidationFailure",
            MopError::LengthMismatch { .. } => "LengthMismatch",
            MopError::NotDSymmetric { .. } => "NotDSymmetric",
            MopError::ZeroConstantTerm(_) => "ZeroConstantTerm",
            MopError::OverlapInconsistency { .. } => "OverlapInconsistency",
            MopError::InsufficientHorizon { .. } => "InsufficientHorizon",
            MopError::InsufficientMoments { .. } => "InsufficientMoments",
            MopError::OutsideDomain { .. } => "OutsideDomain",
            MopError::IndexOutOfRange { .. } => "IndexOutOfRange",
            MopError::StructureViolation(_) => "StructureViolation",
            MopError::InsufficientBlocks { .. } => "InsufficientBlocks",
            MopError::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, MopError>;
