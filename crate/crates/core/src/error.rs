use thiserror::Error;

/// Errors raised while validating or evaluating team problems.
#[derive(Debug, Error)]
pub enum Error {
    #[error("chi must be positive, got {0}")]
    ChiNonpositive(f64),

    #[error("prior entries sum to {sum}, expected 1 (tolerance {tol:e})")]
    PriorNotNormalized { sum: f64, tol: f64 },

    #[error("prior entry {index} is negative ({value})")]
    NegativePrior { index: usize, value: f64 },

    #[error("prior entry {index} is not finite")]
    NonFinitePrior { index: usize },

    #[error("cost matrix {matrix}[{row}][{col}] = {value} is not a 0/1 indicator")]
    MatrixEntry {
        matrix: char,
        row: usize,
        col: usize,
        value: i64,
    },

    #[error("lambda must lie in the open interval (1/2, 1), got {0}")]
    LambdaOutOfRange(f64),

    #[error("invalid symmetric prior: {0}")]
    InvalidSymPrior(String),

    #[error("every ratio term has a zero denominator; the prior puts no usable mass on xi_W = 1")]
    DegeneratePrior,

    #[error("theta minimiser is ambiguous: {0} is zero")]
    AmbiguousSign(&'static str),

    #[error("state is not normalised: squared norm {0}")]
    NonUnitState(f64),

    #[error("measurement basis is not orthonormal (residual {0:e})")]
    NonOrthonormalBasis(f64),

    #[error("angle `{0}` is not finite")]
    NonFiniteAngle(&'static str),

    #[error("action assignment entry {index} = {value} is not an action index (0 or 1)")]
    AssignmentEntry { index: usize, value: i64 },

    #[error("instance declared as `{declared}` but its cost matrices classify as {found}")]
    ClassMismatch { declared: String, found: String },

    #[error("operation requires {required}, instance is {found}")]
    UnsupportedInstance { required: &'static str, found: String },

    #[error("{0}")]
    Schema(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("threshold quadratic is degenerate (A = {0} < 1)")]
    DegenerateThreshold(f64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
