//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A constructor or operation received arguments violating its contract
    /// (NaN, non-positive width, mismatched masses, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Argument outside the supported domain of a special function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive integrator exhausted its subdivision budget.
    #[error(
        "quadrature failed to converge: error {error:.3e} > tolerance {tolerance:.3e} \
         after {subdivisions} subdivisions"
    )]
    QuadratureConvergence {
        error: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    /// Integral known to diverge for the given parameters.
    #[error("divergent integral: {0}")]
    Divergence(String),

    /// A stored curve does not cover the requested evaluation range.
    #[error("grid coverage: {0}")]
    GridCoverage(String),

    /// Histogram specification with zero-width or empty bins.
    #[error("degenerate histogram bins: {0}")]
    DegenerateBins(String),

    /// Closed-form detector elements requested for a scenario outside the
    /// symmetric conventions they assume.
    #[error("detector symmetry convention violated: {0}")]
    Convention(String),

    /// Two-particle state with vanishing norm (fully overlapped fermion pair).
    #[error("degenerate two-particle state: {0}")]
    DegenerateState(String),

    /// A density came out more negative than quadrature noise allows.
    #[error("negative density {value:.3e} at t_c = {t_c}; quadrature failure")]
    NegativeDensity { value: f64, t_c: f64 },

    /// Curve or result violating a probability bound.
    #[error("probability bound violated: {0}")]
    ProbabilityBound(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
