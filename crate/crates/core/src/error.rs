use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("cotangent fiber too large: |xi| = {norm} exceeds the bound {bound} for this model")]
    FiberTooLarge { norm: f64, bound: f64 },

    #[error("branch ambiguity: argument {arg} lies on the branch cut")]
    BranchAmbiguity { arg: String },

    #[error("point lies outside the model's tube domain: {reason}")]
    OutsideTube { reason: String },

    #[error("model not supported for this operation: {0}")]
    ModelUnsupported(String),

    #[error("spectral window [{lo}, {hi}] contains no frequencies")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("degenerate point: the spectral projection vanishes here")]
    DegeneratePoint,

    #[error("lambda grid insufficient: need at least {need} points spanning a factor >= {span}")]
    InsufficientRange { need: usize, span: f64 },

    #[error("non-positive value in log fit: {0}")]
    NonPositiveValue(f64),

    #[error(
        "integration outside the absolute convergence region: |Im zeta| = {im} >= tau = {tau}"
    )]
    DivergentRegion { im: f64, tau: f64 },

    #[error("quadrature failed to reach tolerance: achieved {achieved}, requested {requested}")]
    QuadratureFailure { achieved: f64, requested: f64 },

    #[error("spectral sum tail too large: truncation L = {l} leaves tail estimate {tail}")]
    TailTooLarge { l: usize, tail: f64 },

    #[error("evaluation point on the characteristic conoid")]
    OnConoid,

    #[error("leading trigonometric coefficient pair is zero")]
    DegenerateLeadingCoefficient,

    #[error("root finding did not converge: {unconverged} roots above residual tolerance")]
    NonConvergence { unconverged: usize },

    #[error("quadrature grid too coarse: methods disagree by {disagreement}, tolerance {tol}")]
    GridTooCoarse { disagreement: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
