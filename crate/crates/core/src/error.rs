use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Sobolev series diverges at xi = {xi}")]
    DivergentSeries { xi: f64 },

    #[error("Sobolev weight vanishes at interior point xi = {xi} of the support")]
    VanishingSobolevWeight { xi: f64 },

    #[error(
        "discretized measure does not resolve degree {degree}: orthonormality residual {residual:.3e} \
         exceeds {tolerance:.1e}; retry with at least {suggested_points} quadrature points"
    )]
    QuadratureResolution {
        degree: usize,
        residual: f64,
        tolerance: f64,
        suggested_points: usize,
    },

    #[error("tridiagonal eigensolver did not converge after {iterations} iterations")]
    EigenNonConvergence { iterations: usize },

    #[error("oscillatory quadrature at x = {x} needs {needed} panels, budget is {budget}")]
    OscillationBudget { x: f64, needed: usize, budget: usize },

    #[error("mollifier does not satisfy v|g|^2 = w: residual {residual:.3e}")]
    MollifierMismatch { residual: f64 },

    #[error("derivative of order {order} unavailable for {what}")]
    DerivativeUnavailable { order: usize, what: String },

    #[error("trapezoid aliasing detected: coefficients change by {change:.3e} when the grid is doubled")]
    Aliasing { change: f64 },

    #[error("singular system: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
