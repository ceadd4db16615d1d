//! Shared error type for all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kernel is +infinity at coincident points")]
    CoincidentPoints,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sphere radius must be strictly positive, got {0}")]
    NonpositiveRadius(f64),

    #[error("weight must be strictly positive, got {value} at index {index}")]
    NonpositiveWeight { index: usize, value: f64 },

    #[error("duplicate support point at indices {0} and {1}")]
    DuplicatePoint(usize, usize),

    #[error("measure must carry at least one atom or sphere")]
    EmptyMeasure,

    #[error("cutoff {cutoff} exceeds the limit index {n_max}")]
    CutoffExceedsLimit { cutoff: usize, n_max: usize },

    #[error(
        "measures are not setwise ordered: weight {small} exceeds {large} at support index {index}"
    )]
    NotDominated {
        index: usize,
        small: f64,
        large: f64,
    },

    #[error("atomic measure charges a polar set: atoms carry zero capacity for a kernel with positive singularity exponent")]
    PolarAtomicSupport,

    #[error("sphere-family measures are exact only under the three-dimensional Newtonian kernel")]
    SphereKernelUnsupported,

    #[error("linear system is numerically singular or lost accuracy beyond the solver tolerance")]
    SingularSystem,

    #[error("operator has eigenvalue {0} outside the open positive half-line")]
    NonpositiveEigenvalue(f64),

    #[error("eigensolver did not converge within {0} sweeps")]
    ConvergenceFailure(usize),

    #[error("interval endpoint {0} coincides with an eigenvalue within the clustering tolerance")]
    BoundaryHitsEigenvalue(f64),

    #[error("k_max {k_max} exceeds the smallest support size {min_support} in the sequence")]
    ShrinkingSupport { k_max: usize, min_support: usize },

    #[error("mass matrix has a nonpositive diagonal entry at index {0}")]
    SingularMass(usize),

    #[error("no sign change found while bracketing zero {index} of order {order}")]
    BracketFailure { order: usize, index: usize },

    #[error("quadrature needs at least {min} nodes, got {got}")]
    QuadratureUnderflow { min: usize, got: usize },

    #[error("test point at distance {dist} from a sphere is closer than {limit}")]
    PointTooCloseToSupport { dist: f64, limit: f64 },

    #[error("invalid configuration: {0}")]
    ConfigParse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
