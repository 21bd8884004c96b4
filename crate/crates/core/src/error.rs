use thiserror::Error;

/// Errors raised by the analytic engine, the asymptotic formulas and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The adaptive integrator ran out of subdivisions. The best estimate is kept.
    #[error("quadrature did not converge (estimate {estimate:e}, error bound {abs_error:e})")]
    NonConvergence { estimate: f64, abs_error: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("divergent integral: {0}")]
    Divergence(String),

    #[error("infeasible beam adaptation: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
