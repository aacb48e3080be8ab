use thiserror::Error;

/// Errors raised by problem registration, splitting, denominators and integrators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NsfdError {
    #[error("derivative of `{problem}` disagrees with central differences at y = {y}: df = {df}, fd = {fd}")]
    DerivativeMismatch { problem: String, y: f64, df: f64, fd: f64 },

    #[error("f(0) = {value} < 0, positivity cannot be preserved")]
    NegativeAtZero { value: f64 },

    #[error("exact solution of `{problem}` violates the ODE at t = {t}: residual {residual}")]
    ExactSolutionMismatch { problem: String, t: f64, residual: f64 },

    #[error("f has no zeros on the sampling window, split bounds are undefined")]
    NoSignStructure,

    #[error("sign of f beyond its largest zero {y_m} is ambiguous")]
    AmbiguousTail { y_m: f64 },

    #[error("auxiliary function drops below M = {m} (g({y}) = {g})")]
    GNotInClass { m: f64, y: f64, g: f64 },

    #[error("step size must be positive, got {h}")]
    NonPositiveStep { h: f64 },

    #[error("state must be nonnegative, got {y}")]
    NegativeState { y: f64 },

    #[error("weights violate alpha + beta = 1, alpha <= 0, beta >= 0 (alpha = {alpha}, beta = {beta})")]
    InvalidWeights { alpha: f64, beta: f64 },

    #[error("parameter `{name}` = {value} out of range: {reason}")]
    ParameterOutOfRange { name: &'static str, value: f64, reason: &'static str },

    #[error("integration would take {steps} steps (limit {limit})")]
    StepCountOverflow { steps: f64, limit: u64 },

    #[error("oracle disagrees with the exact solution at t = {t} by {diff}")]
    OracleSelfCheckFailed { t: f64, diff: f64 },

    #[error("reference grid does not match trajectory grid: {0}")]
    GridMismatch(String),

    #[error("system `{0}` has no Jacobian")]
    JacobianMissing(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, NsfdError>;
