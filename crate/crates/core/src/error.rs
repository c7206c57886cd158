//! Error type shared across the toolkit.

use thiserror::Error;

/// Errors produced by model construction, grading and the solvers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("semilattice is not meet-closed: {0} ∧ {1} = {2} is missing")]
    MeetClosureViolation(String, String, String),
    #[error("semilattice has no least element")]
    NoLeastElement,
    #[error("space {0} is not a member of the semilattice")]
    NotAMember(String),
    #[error("{0} is not a subspace of {1}")]
    NotASubspace(String, String),
    #[error("{0} is not a strict subspace of {1}")]
    NotAStrictSubspace(String, String),
    #[error("axis {0} is not part of the declared axis universe")]
    UnknownAxis(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cluster semilattice needs at least 2 masses, got {0}")]
    TooFewParticles(usize),
    #[error("kinetic symbol for {space}: expected {expected} values, got {got}")]
    SymbolLength {
        space: String,
        expected: usize,
        got: usize,
    },
    #[error("interaction term with Z={z}: block ({x},{y}) violates the support rule Z ⊆ X∩Y")]
    SupportViolation { z: String, x: String, y: String },
    #[error("interaction blocks ({x},{y}) and ({y},{x}) are not adjoint to each other (max deviation {deviation:.3e})")]
    HermitianClosureViolation {
        x: String,
        y: String,
        deviation: f64,
    },
    #[error("operators live on different sector tables")]
    SectorTableMismatch,
    #[error("operator carries no term decomposition; graded projection is undefined")]
    MissingDecomposition,
    #[error("term with Z={z}: block ({x},{y}) does not factor through the quotient by {quotient}")]
    NonFactorizableTerm {
        z: String,
        x: String,
        y: String,
        quotient: String,
    },
    #[error("kinetic symbol of {space} does not split across the quotient by {quotient} (max deviation {deviation:.3e})")]
    NonSeparableKinetic {
        space: String,
        quotient: String,
        deviation: f64,
    },
    #[error("dense kernel with Z={z} on block ({x},{y}) is not Z-translation invariant (max deviation {deviation:.3e})")]
    NotZInvariant {
        z: String,
        x: String,
        y: String,
        deviation: f64,
    },
    #[error("restriction to an empty sector subset")]
    EmptySubset,
    #[error("dense solve refused: dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("Lanczos did not converge: {iterations} iterations, residual {residual:.3e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("eigenvalue set {0:?} overlaps the threshold set")]
    OverlapViolation(Vec<f64>),
    #[error("unknown {family} strategy '{name}' (known: {known})")]
    UnknownStrategy {
        family: &'static str,
        name: String,
        known: String,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config validation failed at {field}: {message}")]
    Validation { field: String, message: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
