use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// `1 + chi` landed on the negative real axis, so no branch of the square
    /// root gives a physical index. Only reachable through the lossless hook.
    #[error("refractive index undefined: 1 + chi = {re} + {im}i lies on the branch cut")]
    BranchCut { re: f64, im: f64 },

    #[error("slab denominator degenerate (|D| = {0:e})")]
    DegenerateDenominator(f64),

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    RootNotConverged { iterations: usize, residual: f64 },

    #[error("minimizer did not converge after {iterations} iterations")]
    MinimizerNotConverged { iterations: usize },

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}")]
    QuadratureNotConverged { estimate: f64, error: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
