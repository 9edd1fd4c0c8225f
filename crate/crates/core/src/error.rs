use thiserror::Error;

/// Errors raised by the simulation, optimization and numerical kernels.
///
/// Payload values are reported as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("a delta pulse has no pointwise value")]
    DeltaNotPointwise,

    #[error("{0} pulses have no closed-form amplitude; use the convolution engine")]
    UnsupportedShape(&'static str),

    #[error("quadrature on [{a}, {b}] stopped after {subdivisions} subdivisions with error estimate {error_estimate:e}")]
    MaxSubdivisions {
        a: f64,
        b: f64,
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("no sign change on bracket [{lo}, {hi}]: g(lo) = {g_lo:e}, g(hi) = {g_hi:e}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("root tolerance {tol:e} unreachable: best point {root} has residual {residual:e}")]
    RootToleranceUnreachable { root: f64, residual: f64, tol: f64 },

    #[error("ODE step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("excitation ledger violated at t = {t}: total = {total} (tolerance {tol:e})")]
    LedgerViolation { t: f64, total: f64, tol: f64 },

    #[error("threshold {p_th} is not below the charging bound {bound}")]
    ThresholdUnreachable { p_th: f64, bound: f64 },

    #[error("no interior maximum of p(T)/T found: {0}")]
    NoInteriorMaximum(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
