use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan type {label}{rank}")]
    InvalidType { label: String, rank: usize },

    #[error("invalid node order {0:?}: must be a permutation of 1..=rank")]
    InvalidNodeOrder(Vec<usize>),

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("Weyl group has {required} elements, above the configured bound {bound}")]
    BoundExceeded { required: usize, bound: usize },

    #[error("not a root: {0:?}")]
    NotARoot(Vec<i64>),

    #[error("unknown Weyl group element: {0}")]
    UnknownElement(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{to} is unreachable from {from} in the quantum Bruhat graph")]
    Unreachable { from: String, to: String },

    #[error("shortest paths from {from} to {to} carry different weights")]
    PathWeightNotUnique { from: String, to: String },

    #[error("quantum Deodhar lift is not unique in coset {coset} relative to {reference}")]
    LiftNotUnique { coset: String, reference: String },

    #[error("weight {0:?} has mixed signs; use a segment or concatenated chain")]
    MixedSignWeight(Vec<i64>),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("weight {0:?} is not anti-dominant")]
    NotAntiDominant(Vec<i64>),

    #[error("alcove walk step {step} does not cross a wall of the current alcove")]
    NotAdjacent { step: usize },

    #[error("alcove walk ends at the wrong alcove")]
    EndpointMismatch,

    #[error("chain provenance {found} not accepted here (expected {expected})")]
    WrongProvenance { expected: String, found: String },

    #[error("non-reduced chain requires the unverified-input flag")]
    UnverifiedChain,

    #[error("subset is not admissible: step {step} (chain position {position}) is not a quantum Bruhat graph edge")]
    NotAdmissible { step: usize, position: usize },

    #[error("invalid quantum LS path: {0}")]
    InvalidQlsPath(String),

    #[error("bijection failure: {0}")]
    Bijection(String),

    #[error("incompatible truncation policies")]
    TruncationMismatch,

    #[error("root must be positive")]
    NegativeRoot,

    #[error("Yang-Baxter precondition violated: {0}")]
    YbePrecondition(String),

    #[error("non-integral value where an integer was required: {0}")]
    NonIntegral(String),

    #[error("structure constant theorem violated: {0}")]
    TheoremViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
