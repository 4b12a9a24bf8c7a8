use thiserror::Error;

use crate::gf2::Gf2Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gf2: {0}")]
    Gf2(#[from] Gf2Error),

    #[error("lattice: primitive of the zero vector")]
    ZeroVector,

    #[error("polytope: points span an affine space of dimension {rank}, expected {dim}")]
    NotFullDimensional { dim: usize, rank: usize },
    #[error("polytope: origin is not strictly interior")]
    OriginNotInterior,
    #[error("polytope: polar has non-integral vertices")]
    NotLattice,
    #[error("polytope: not reflexive")]
    NotReflexive,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("fan: {0}")]
    CorrespondenceMismatch(String),
    #[error("fan: cones {lower} and {upper} do not form a cover")]
    NotACover { lower: usize, upper: usize },

    #[error("cosheaf: composites disagree on the diamond {lower} < {upper}")]
    FunctorialityViolation { lower: usize, upper: usize },
    #[error("cosheaf: boundary composite nonzero in degree {p}")]
    BoundarySquareNonzero { p: usize },

    #[error("hodge: column {p} sums to {column} below real Betti number {betti}")]
    ColumnSumBelowBetti { p: usize, column: usize, betti: usize },
    #[error("hodge: edge class of cone {cone} is not a cycle")]
    NotACycle { cone: usize },

    #[error("koszul: input is not a short exact sequence ({0})")]
    NotExactInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Precondition,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Parse { .. } | UnknownCorpus(_) => ErrorKind::Parse,
            NotFullDimensional { .. }
            | OriginNotInterior
            | NotLattice
            | NotReflexive
            | DimensionMismatch { .. }
            | ZeroVector
            | NotACover { .. }
            | NotExactInput(_) => ErrorKind::Precondition,
            _ => ErrorKind::Internal,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
