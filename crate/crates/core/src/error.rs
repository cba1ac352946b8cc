use thiserror::Error;

use crate::rational::RatVec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not a lattice polytope: vertex {0} is not integral")]
    NotLatticePolytope(RatVec),

    #[error("{vertex} is not a Delzant vertex: {reason}")]
    NotDelzantVertex { vertex: RatVec, reason: String },

    #[error("polytope is not normalized at the origin: {0}")]
    NotNormalized(String),

    #[error("incomparable potential families: {0}")]
    IncomparableFamilies(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("valuation of an empty support")]
    EmptySupport,

    #[error("regularization width must be positive, got {0}")]
    NonpositiveEpsilon(f64),

    #[error("level k = {0} is not among the stored approximants")]
    UnknownLevel(u32),

    #[error("growth violation: {message}")]
    GrowthViolation {
        message: String,
        /// Vertex of the source slope polytope that is not interior to the target's.
        vertex: Option<RatVec>,
        /// Facet `<normal, x> <= offset` of the target slope polytope it fails to clear.
        facet: Option<(RatVec, String)>,
    },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotLatticePolytope(_) => "NotLatticePolytope",
            Error::NotDelzantVertex { .. } => "NotDelzantVertex",
            Error::NotNormalized(_) => "NotNormalized",
            Error::IncomparableFamilies(_) => "IncomparableFamilies",
            Error::EmptyInput(_) => "EmptyInput",
            Error::EmptySupport => "EmptySupport",
            Error::NonpositiveEpsilon(_) => "NonpositiveEpsilon",
            Error::UnknownLevel(_) => "UnknownLevel",
            Error::GrowthViolation { .. } => "GrowthViolation",
            Error::NonConvergence(_) => "NonConvergence",
            Error::Parse(_) => "Parse",
        }
    }
}
