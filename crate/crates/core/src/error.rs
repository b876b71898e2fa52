use thiserror::Error;

/// Errors raised by the operator, quadrature and ascent routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator dimension must be positive")]
    Empty,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "eigendecomposition of a {dim}x{dim} matrix did not converge \
         (frobenius norm {frobenius:.3e}, hermitian defect {defect:.3e})"
    )]
    Decomposition {
        dim: usize,
        frobenius: f64,
        defect: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported quadrature request: dimension {dim}, level {level} ({reason})")]
    UnsupportedRule {
        dim: usize,
        level: usize,
        reason: &'static str,
    },

    #[error("quadrature level {level} is below the series truncation order {needed}")]
    InsufficientLevel { level: usize, needed: usize },

    #[error("family does not commute: defect {defect:.3e} exceeds {tolerance:.3e}")]
    NotCommuting { defect: f64, tolerance: f64 },

    #[error("parity mismatch: {0}")]
    Parity(String),

    #[error(
        "|t| = {t} lies outside the certified radius {radius:.6e}; \
         the tail bound cannot reach the requested tolerance"
    )]
    OutsideRadius { t: f64, radius: f64 },

    #[error("series order {order} for dimension {dim} exceeds the memory budget")]
    MemoryBudget { order: usize, dim: usize },

    #[error("truncation did not reach tolerance {tol:.3e} by order {order}")]
    TruncationFailed { order: usize, tol: f64 },

    #[error("grid: {0}")]
    Grid(String),

    #[error("polynomial fit residual {residual:.3e} exceeds {tol:.3e} at degree {degree}")]
    FitResidual { residual: f64, tol: f64, degree: usize },

    #[error("fixture: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
