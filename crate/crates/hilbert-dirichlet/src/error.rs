use thiserror::Error;

/// Crate-wide error type.
///
/// Numerical *outcomes* (a diverging integral, an unbounded supremum trail)
/// are not errors; they are carried by [`crate::quadrature::DivergenceVerdict`]
/// and friends. Errors are reserved for invalid inputs, violated hypotheses
/// and genuine numerical failures.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The integrand evaluated to NaN (`nan = true`) or overflowed to
    /// infinity (`nan = false`) at the given point.
    #[error("integrand is not finite at t = {at}")]
    NonFiniteIntegrand { at: f64, nan: bool },

    /// The requested accuracy was not reached within the panel budget.
    /// Carries the best available estimate and its error bound.
    #[error("quadrature accuracy not reached: best estimate {best} (error bound {error})")]
    AccuracyNotReached { best: f64, error: f64 },

    /// An operation was refused because a hypothesis on the weight fails.
    /// `condition` names the failing condition in the module's vocabulary
    /// (e.g. "M1", "M2", "doubling", "well-definedness integral").
    #[error("hypothesis not met for weight {weight}: {condition} {detail}")]
    HypothesisNotMet {
        weight: String,
        condition: String,
        detail: String,
    },

    /// Double-precision underflow; the extended (log-scale) mode can
    /// represent the value.
    #[error("value underflows double precision (log value {log_value}); use extended precision mode")]
    Underflow { log_value: f64 },

    /// A dyadic-block basis element has no mass in the requested block.
    #[error("degenerate block: index {n} carries no coefficient mass")]
    DegenerateBlock { n: usize },

    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
