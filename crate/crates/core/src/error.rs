use num_complex::Complex64;
use thiserror::Error;

/// Failures reported by the numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("the model needs n >= 3, got n = {0}")]
    InvalidN(usize),

    #[error("{what} has a pole at {pole} (spectral parameter {lambda})")]
    Pole {
        what: &'static str,
        lambda: Complex64,
        pole: f64,
    },

    #[error("expected a square operator of dimension {expected}, got {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("site {site} is out of range for a chain of length {length}")]
    SiteOutOfRange { site: usize, length: usize },

    #[error("pair (L, 1) requires periodic boundary conditions")]
    NotPeriodic,

    #[error("state has norm {norm}, expected 1")]
    Unnormalized { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error(
        "Lanczos stopped after {matvecs} products without converging \
         (best estimate {estimate}, residual {residual:e})"
    )]
    NoConvergence {
        matvecs: usize,
        estimate: f64,
        residual: f64,
    },

    #[error("dominant transfer-matrix eigenvalue is not simple (relative gap {gap:e})")]
    DegenerateDominant { gap: f64 },

    #[error("density matrix is not in span{{I, P, E}} (residual {residual:e})")]
    Decomposition { residual: f64 },

    #[error("{method} failed: {detail}")]
    Solver { method: &'static str, detail: String },

    #[error("reference data: {0}")]
    Reference(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
