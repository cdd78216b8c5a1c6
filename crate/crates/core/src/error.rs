use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rectangle {id}: {reason}")]
    InvalidRect { id: u64, reason: String },

    #[error("invalid segment {id}: {reason}")]
    InvalidSegment { id: u64, reason: String },

    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, id: u64 },

    #[error("rectangle {0} is not stabbed by any available segment")]
    Uncoverable(u64),

    #[error("operation requires an unconstrained instance")]
    ConstrainedInstance,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sub-rounder returned a cover that misses element {element} of family {family}")]
    InfeasibleSubCover { family: u8, element: u64 },

    #[error("scaled LP solution is infeasible on family {family} at element {element}")]
    InfeasibleScaledLp { family: u8, element: u64 },

    #[error("graph is not planar")]
    NonPlanar,

    #[error("layout failure: {0}")]
    Layout(String),

    #[error("certificate violated: {0}")]
    Certificate(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
