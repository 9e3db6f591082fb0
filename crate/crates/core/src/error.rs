use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("derivative order {order} outside {min}..={max}")]
    DerivativeOrder { order: u32, min: u32, max: u32 },
    #[error("speed {v} must satisfy |v| < 1")]
    SpeedOutOfRange { v: f64 },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("separation must be positive, got {z}")]
    NonPositiveSeparation { z: f64 },
    #[error("grid [{lo}, {hi}] does not cover required interval [{need_lo}, {need_hi}]")]
    GridTooSmall { lo: f64, hi: f64, need_lo: f64, need_hi: f64 },
    #[error("kink centers out of order: x1={x1} must be < x2={x2}")]
    KinksOutOfOrder { x1: f64, x2: f64 },
    #[error("CFL number {cfl} exceeds limit {limit} for stencil order {order}")]
    CflViolation { cfl: f64, limit: f64, order: u32 },
    #[error("non-finite field value at t={t} (last finite time {last_valid_t})")]
    NonFinite { t: f64, last_valid_t: f64 },
    #[error("modulation Newton iteration failed after {iterations} iterations (residual {residual:e})")]
    NewtonFailed { iterations: usize, residual: f64 },
    #[error("modulation matrix near-singular (det {det:e})")]
    SingularMatrix { det: f64 },
    #[error("kink separation collapsed to {z}")]
    Collapsed { z: f64 },
    #[error("energy excess {eps} outside (0, 1/e)")]
    InvalidEpsilon { eps: f64 },
    #[error("arctanh argument {arg} too close to +-1")]
    ArctanhDomain { arg: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate fit: {0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
