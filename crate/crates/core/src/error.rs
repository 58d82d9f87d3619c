use thiserror::Error;

use crate::graph::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used to pick a process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input text, unknown ids, I/O.
    Input,
    /// The graph failed validation.
    Validation,
    /// An enumeration exceeded the configured point budget.
    RegionTooLarge,
    /// A mathematical hypothesis of the requested formula does not hold.
    Hypothesis,
    /// A structural invariant the theory guarantees was violated.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("invalid resolution graph: {}", .0.failure_codes().join(", "))]
    InvalidGraph(ValidationReport),
    #[error("cycle has {found} coefficients, graph has {expected} vertices")]
    GraphMismatch { expected: usize, found: usize },
    #[error("class is not in the dual lattice: pairing with `{vertex}` is {pairing}")]
    NotInLPrime { vertex: String, pairing: String },
    #[error("enumeration needs more than {limit} points")]
    RegionTooLarge { limit: u64 },
    #[error("support precondition failed: {0}")]
    PreconditionSupport(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("graph is rational; the requested invariant needs a non-rational graph")]
    RationalGraph,
    #[error("minimizer set is not a lattice: {0}")]
    NotALattice(String),
    #[error("t_{vertex} = {t} is negative on the support of the Chern class")]
    TNegative { vertex: String, t: i64 },
    #[error("Z is not C_min(Z, l'): C_min = {cmin}")]
    CminViolation { cmin: String },
    #[error("h1 provider failed: {0}")]
    Provider(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "PARSE",
            Error::DuplicateVertex(_) => "DUPLICATE_VERTEX",
            Error::UnknownVertex(_) => "UNKNOWN_VERTEX",
            Error::InvalidGraph(_) => "INVALID_GRAPH",
            Error::GraphMismatch { .. } => "GRAPH_MISMATCH",
            Error::NotInLPrime { .. } => "NOT_IN_LPRIME",
            Error::RegionTooLarge { .. } => "REGION_TOO_LARGE",
            Error::PreconditionSupport(_) => "PRECONDITION_SUPPORT",
            Error::Precondition(_) => "PRECONDITION",
            Error::RationalGraph => "RATIONAL_GRAPH",
            Error::NotALattice(_) => "NOT_A_LATTICE",
            Error::TNegative { .. } => "T_NEGATIVE",
            Error::CminViolation { .. } => "CMIN_VIOLATION",
            Error::Provider(_) => "PROVIDER",
            Error::Overflow(_) => "OVERFLOW",
            Error::Internal(_) => "INTERNAL",
            Error::Io(_) => "IO",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. }
            | Error::DuplicateVertex(_)
            | Error::UnknownVertex(_)
            | Error::GraphMismatch { .. }
            | Error::Provider(_)
            | Error::Io(_) => ErrorClass::Input,
            Error::InvalidGraph(_) => ErrorClass::Validation,
            Error::RegionTooLarge { .. } => ErrorClass::RegionTooLarge,
            Error::NotInLPrime { .. }
            | Error::PreconditionSupport(_)
            | Error::Precondition(_)
            | Error::RationalGraph
            | Error::TNegative { .. }
            | Error::CminViolation { .. } => ErrorClass::Hypothesis,
            Error::NotALattice(_) | Error::Overflow(_) | Error::Internal(_) => ErrorClass::Internal,
        }
    }
}
