use thiserror::Error;

/// Errors raised by the numerical kernels and artifact writers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice generators are linearly dependent (|det B| = {0:e})")]
    DegenerateLattice(f64),

    #[error("grid size must be an even number >= 8, got {0}")]
    BadGridSize(usize),

    #[error("metric not positive definite")]
    NotPositiveDefinite,

    #[error("spinor not unit length (max deviation {0:e})")]
    NotUnit(f64),

    #[error("spin character entries must be +1 or -1, got {0}")]
    BadCharacter(i64),

    #[error("descent violated along generator {generator}: phase {phase:.6} rad is incompatible with character {chi}")]
    Descent { generator: usize, phase: f64, chi: i8 },

    #[error("right-hand side is not mean-free (mean {0:e})")]
    NotMeanFree(f64),

    #[error("conjugate gradient did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("flow step size underflow (dt = {0:e})")]
    StepUnderflow(f64),

    #[error("input not critical (gradient residual {residual:e} > {tol:e})")]
    NotCritical { residual: f64, tol: f64 },

    #[error("spinor does not satisfy Dφ = Hφ (closedness residual {residual:e} > {tol:e})")]
    NotIntegrable { residual: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("handle count mismatch: genus {gamma} needs {expected} handles, got {got}")]
    HandleCount { gamma: u32, expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
