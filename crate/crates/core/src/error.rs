use thiserror::Error;

/// Errors raised by the evaluation, quadrature and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported polygamma order {order} (maximum {max})")]
    UnsupportedOrder { order: i64, max: u32 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("invalid family index ({p},{m},{n},{q}): {reason}")]
    InvalidIndex {
        p: u32,
        m: u32,
        n: u32,
        q: u32,
        reason: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e} after {evaluations} evaluations")]
    QuadratureNonConvergence {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("denominator {0:e} too close to zero")]
    NearZeroDenominator(f64),

    #[error("no sign change bracketed for the kernel polynomial up to t = {0:e}")]
    BracketFailure(f64),

    #[error("no witness found for x in [{lo:e}, {hi:e}]")]
    NoWitness { lo: f64, hi: f64 },

    #[error("limit gap grew from {from:e} to {to:e} at x = {x:e}")]
    Divergence { from: f64, to: f64, x: f64 },

    #[error("limit gap {gap:e} at x = {x:e} exceeds tolerance {tol:e}")]
    NotConverged { gap: f64, x: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("{name} must be positive and finite, got {x}")));
    }
    Ok(())
}
