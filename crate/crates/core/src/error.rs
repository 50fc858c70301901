use thiserror::Error;

/// Errors raised by the exact algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no square class")]
    ZeroHasNoSquareClass,
    #[error("invalid field `{0}`: {1}")]
    InvalidField(String, String),
    #[error("cannot parse `{0}` as an element of {1}")]
    InvalidElement(String, String),
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("unknown space `{0}` (expected C or C0)")]
    InvalidSpace(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("algebra construction failed: {0}")]
    AlgebraConstruction(String),
    #[error("invalid algebra description `{0}`: {1}")]
    InvalidAlgebraSpec(String, String),
    #[error("octonions belong to different algebras")]
    AlgebraMismatch,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("the zero octonion is not allowed here")]
    ZeroOctonion,
    #[error("octonion is not pure")]
    NotPure,
    #[error(
        "subspace is not a hyperplane: dimension {dim} in an ambient space of dimension {ambient}"
    )]
    BadHyperplane { dim: usize, ambient: usize },
    #[error("census infeasible: {0}")]
    CensusInfeasible(String),
    #[error("form family is degenerate: rank {0} < 7")]
    DegenerateFamily(usize),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("operation requires a division algebra (anisotropic norm)")]
    RequiresDivisionAlgebra,
    #[error("matrix does not have determinant 1")]
    NotUnimodular,
    #[error("operation requires the split Zorn construction")]
    RequiresSplitZorn,
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
