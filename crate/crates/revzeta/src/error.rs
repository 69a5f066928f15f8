//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument left the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The profile failed validation (non-positive or non-finite values).
    #[error("profile not positive: f({x}) = {value}")]
    ProfileNotPositive { x: f64, value: f64 },

    /// A profile specification could not be interpreted.
    #[error("invalid profile spec: {0}")]
    InvalidSpec(String),

    /// Adaptive quadrature ran out of subdivisions before reaching the
    /// requested tolerance. Carries the best estimate and its error bound.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    QuadratureAccuracy { estimate: f64, error_bound: f64 },

    /// The ODE integrator failed (step-size underflow or step budget).
    #[error("ode integration failed: {0}")]
    Ode(String),

    /// Eigenvalue scanning could not bracket the requested root.
    #[error("eigenvalue bracket failure for mode k={k} at n={n}")]
    Bracket { k: u32, n: usize },

    /// An eigenvalue table does not cover the request.
    #[error("coverage error: {0}")]
    Coverage(String),

    /// Least-squares fit was rejected (too few points or ill-conditioned).
    #[error("fit error: {0}")]
    Fit(String),

    /// An internal consistency check failed; indicates a bug, not bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
