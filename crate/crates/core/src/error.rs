use thiserror::Error;

/// Library-wide error type.
///
/// Variants are grouped by how a caller should react: `Parse`/`Shape`-style
/// errors mean the input data is malformed, the remaining variants report a
/// mathematically meaningful rejection (infeasibility, degenerate input,
/// violated precondition) discovered during an exact computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("the zero vector has no primitive representative")]
    ZeroVector,

    #[error("right block of the degree matrix is not the identity; row-reduce first")]
    NotIdentityBlock,

    #[error("degenerate linear system: {0}")]
    DegenerateSystem(String),

    #[error("element {0} is a loop (its coordinate functional vanishes identically)")]
    Loop(usize),

    #[error("matroid is disconnected; the coarse structure needs a connected matroid")]
    DisconnectedMatroid,

    #[error("element index {index} out of range for ground set of size {size}")]
    IndexRange { index: usize, size: usize },

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("vector lies outside the support of the fan")]
    OutsideSupport,

    #[error("mixed cone {0:?}: ray and barycenter membership disagree (the fan does not refine the oracle support)")]
    MixedCone(Vec<usize>),

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("polytope has affine dimension {found} < ambient dimension {ambient}")]
    LowerDimensional { found: usize, ambient: usize },

    #[error("infeasible: {reason}; separating functional {certificate:?}")]
    Infeasible {
        reason: String,
        certificate: Vec<String>,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("declared {field} is {declared} but recomputed value is {computed}")]
    DeclaredMismatch {
        field: &'static str,
        declared: String,
        computed: String,
    },
}

impl Error {
    /// True when the error reports bad input data rather than a
    /// mathematically meaningful rejection.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Shape(_)
                | Error::Parse { .. }
                | Error::DimMismatch(_)
                | Error::IndexRange { .. }
                | Error::DeclaredMismatch { .. }
                | Error::NotIdentityBlock
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
