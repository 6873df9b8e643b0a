//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unsupported field discriminant {0}; only 5 and 13 are supported")]
    UnsupportedField(i64),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("zero-divisor pivot over reducible quotient ring; refine the modulus using factor {factor}")]
    ZeroDivisorPivot { factor: String },

    #[error("element is not upper triangular in the projective group")]
    NotParabolic,

    #[error("not a subspace: vector {index} lies outside the ambient space")]
    NotSubspace { index: usize },

    #[error("coboundary space is not contained in the constraint space")]
    SubspaceViolation,

    #[error("factorization incomplete; unfactored remainder of degree {degree}")]
    FactorizationIncomplete { degree: usize },

    #[error("word is not a relation: image under the evaluation map is nontrivial")]
    NotARelation,

    #[error("reduction stuck on an irreducible core with {terms} terms")]
    ReductionStuck { terms: usize },

    #[error("divisibility violated: {0}")]
    DivisibilityViolated(String),

    #[error("relation {0} failed to hold")]
    RelationFailed(String),

    #[error("no coset representative matches; representative set is corrupt")]
    NoMatchingCoset,

    #[error("letter outside the admissible alphabet for this mode")]
    LetterAlphabetViolation,

    #[error("recursion limit exceeded while lifting a group element")]
    LiftRecursionLimit,

    #[error("element does not generate a prime ideal")]
    NotPrime,

    #[error("cusp form space has dimension {dim} > 1; an eigenvector choice is required")]
    MultiplicityTooHigh { dim: usize },

    #[error("could not normalize the Hecke image by an admissible coboundary (weights {weights:?})")]
    NormalizationInfeasible { weights: (u32, u32) },

    #[error("assertion failed: {0}")]
    AssertionFailed(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
