//! Error types for the omm crate.

use thiserror::Error;

/// Errors raised while building or validating model parameters.
#[derive(Debug, Error)]
pub enum ModelError {
    /// The config document could not be deserialized (unknown or missing key,
    /// malformed JSON, wrong type).
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("{name} must be strictly positive, got {value}")]
    NonPositiveRate { name: &'static str, value: f64 },
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("exactly one of `prescribed` or `first_principles` must be present")]
    BlockConflict,
    #[error("`lambda_hz` and `lambda_over_kappa_c` are mutually exclusive")]
    LambdaConflict,
    #[error("unknown preset id `{0}`")]
    UnknownPreset(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("swept parameter `{name}` requires {need} mode")]
    SweptParamMode {
        name: &'static str,
        need: &'static str,
    },
}

/// Errors raised by the steady-state solvers.
#[derive(Debug, Error)]
pub enum SteadyError {
    #[error("operation requires the first_principles block")]
    FirstPrinciplesRequired,
    #[error("operation requires prescribed mode")]
    PrescribedRequired,
    /// The 2x2 real system for the magnon amplitude is singular: the
    /// squeezing drive sits at the parametric-instability threshold.
    #[error("degenerate drive: |2*lambda| at parametric threshold (det = {det:.3e})")]
    DegenerateDrive { det: f64 },
    #[error(
        "fixed point did not converge after {iters} iterations (bistability suspected); \
         last (q1,q2) = ({q1:.6e}, {q2:.6e}), previous = ({prev_q1:.6e}, {prev_q2:.6e})"
    )]
    NoConvergence {
        iters: usize,
        q1: f64,
        q2: f64,
        prev_q1: f64,
        prev_q2: f64,
    },
}

/// Errors raised while evaluating the closed-form probe response.
#[derive(Debug, Error)]
pub enum ResponseError {
    #[error("vanishing denominator {symbol} at delta = {delta:.6e} rad/s")]
    VanishingDenominator { symbol: &'static str, delta: f64 },
    #[error("response pole at delta = {delta:.6e} rad/s")]
    Pole { delta: f64 },
    #[error("transmission is zero at delta = {delta:.6e} rad/s; phase undefined")]
    ZeroTransmission { delta: f64 },
    #[error("invalid sweep: {0}")]
    Sweep(String),
}

/// Errors raised by the sideband linear-system oracle.
#[derive(Debug, Error)]
pub enum OracleError {
    #[error("sideband system singular at delta = {delta:.6e} rad/s")]
    Singular { delta: f64 },
    #[error("solve residual {residual:.3e} exceeds 1e-12 at delta = {delta:.6e} rad/s")]
    ResidualBound { residual: f64, delta: f64 },
}

/// Errors raised by the spectrum analysis routines.
#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("grid too coarse: need at least {need} points, got {got}")]
    GridTooCoarse { need: usize, got: usize },
    #[error("grid is not uniform (max spacing deviation {dev:.3e})")]
    NonUniformGrid { dev: f64 },
    #[error("grid does not cover [{lo:.6e}, {hi:.6e}]")]
    InsufficientCoverage { lo: f64, hi: f64 },
    #[error("mismatched input lengths: {xs} abscissae vs {ys} values")]
    LengthMismatch { xs: usize, ys: usize },
    #[error(transparent)]
    Response(#[from] ResponseError),
}
