//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("eigenvalue {index} is within {tol:e} of zero (mu = {value:e}); the dichotomy needs a spectral gap")]
    ZeroEigenvalue { index: usize, value: f64, tol: f64 },

    #[error("grid too coarse: n_x = {n_x} but at least {required} points are needed for {modes} modes")]
    GridTooCoarse {
        n_x: usize,
        required: usize,
        modes: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("negative time t = {t} not allowed for the heat semigroup")]
    NegativeTime { t: f64 },

    #[error("drift produced a non-finite value at t = {t}, u = {u}")]
    NonFiniteDrift { t: f64, u: f64 },

    #[error("time {t} is not aligned to the grid step {dt} (offset {offset:e})")]
    GridMisaligned { t: f64, dt: f64, offset: f64 },

    #[error("requested window [{lo}, {hi}] exceeds the stored path extent [{extent_lo}, {extent_hi}]")]
    OutOfExtent {
        lo: i64,
        hi: i64,
        extent_lo: i64,
        extent_hi: i64,
    },

    #[error("wrong time sign for mode {mode}: t = {t} on the {side} side of the dichotomy")]
    WrongTimeSign { mode: usize, t: f64, side: &'static str },

    #[error("quadrature window [{lo}, {hi}] exceeds the path extent; enlarge the ensemble extent")]
    WindowExceedsExtent { lo: i64, hi: i64 },

    #[error("fixed-point iteration did not converge in {iters} iterations (last difference {last:e}, tol {tol:e})")]
    NoConvergence { iters: usize, last: f64, tol: f64 },

    #[error("divergent series in {context}: geometric ratio {ratio} >= 1")]
    DivergentSeries { context: &'static str, ratio: f64 },

    #[error("singular linear system in {context} (pivot magnitude {pivot:e})")]
    SingularSystem { context: &'static str, pivot: f64 },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("configuration invalid:\n{}", violations.join("\n"))]
    Validation { violations: Vec<String> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
