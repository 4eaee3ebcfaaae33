//! Shared error type for the whole library.

use std::fmt;

/// Errors surfaced by construction and evaluation routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A nontrivial factorization of the candidate minimal polynomial was found.
    Reducible { factor: String },
    /// The candidate minimal polynomial is not monic with integer coefficients.
    NotMonic,
    /// Sturm analysis requires a squarefree polynomial.
    NotSquarefree,
    /// The prime divides the discriminant; factorization over ℚ_p is not attempted.
    RamifiedPrime { p: u64 },
    /// An interval or p-adic comparison could not be certified at working precision.
    PrecisionLoss { context: String },
    /// Quasi-norm construction requires a totally real field.
    NotTotallyReal,
    /// A supplied binary quadratic failed its anisotropy certificate.
    AnisotropyFailure { place: String },
    /// The matrix for a GL_n action is singular.
    SingularMatrix,
    /// Balancing is undefined on vectors of zero content.
    ZeroContent,
    /// A block norm is certifiably zero; continuous balancing does not apply.
    NullComponent { block: usize },
    /// All block norms are nonzero; null-direction shrinking does not apply.
    AllBlocksNonzero,
    /// Certified shortest-vector enumeration is capped at dimension 4.
    DimensionTooLarge { n: usize },
    /// Malformed input (bad serialization, dimension mismatch, invalid cap).
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Reducible { factor } => write!(f, "REDUCIBLE: nontrivial factor {factor}"),
            Error::NotMonic => write!(f, "NOT_MONIC: minimal polynomial must be monic integral"),
            Error::NotSquarefree => write!(f, "NOT_SQUAREFREE: polynomial has repeated roots"),
            Error::RamifiedPrime { p } => write!(
                f,
                "RAMIFIED_PRIME: {p} divides the discriminant; choose another prime"
            ),
            Error::PrecisionLoss { context } => write!(f, "PRECISION_LOSS: {context}"),
            Error::NotTotallyReal => write!(f, "NOT_TOTALLY_REAL: field has complex embeddings"),
            Error::AnisotropyFailure { place } => {
                write!(f, "ANISOTROPY_FAILURE: quadratic is isotropic at {place}")
            }
            Error::SingularMatrix => write!(f, "SINGULAR_MATRIX: matrix is not invertible"),
            Error::ZeroContent => write!(f, "ZERO_CONTENT: vector has zero content"),
            Error::NullComponent { block } => {
                write!(f, "NULL_COMPONENT: block {block} is zero; use null_shrink")
            }
            Error::AllBlocksNonzero => {
                write!(f, "ALL_BLOCKS_NONZERO: null_shrink needs a zero block")
            }
            Error::DimensionTooLarge { n } => {
                write!(f, "DIMENSION_TOO_LARGE: certified enumeration capped at 4, got {n}")
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
