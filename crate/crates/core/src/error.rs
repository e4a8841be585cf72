use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x = {x} lies outside the domain of {what}")]
    Domain { what: &'static str, x: f64 },

    #[error("hyperbolic argument {argument} exceeds the overflow guard |arg| <= {threshold}")]
    Overflow { argument: f64, threshold: f64 },

    #[error("{what} vanishes at x = {x}")]
    Singular { what: &'static str, x: f64 },

    #[error("pole: E - V_R(x) = 0 at x = {x}")]
    Pole { x: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("1 + 4V1 must be positive for a real C2 (got 1 + 4V1 = {value})")]
    NoRealC2 { value: f64 },

    #[error("parameter shift undefined: {0}")]
    ShiftUndefined(String),

    #[error("level n = {n} is not admissible: {reason}")]
    Inadmissible { n: usize, reason: String },

    #[error("potential is not finite at x = {x}")]
    NonFinitePotential { x: f64 },

    #[error("mass M(x) = {value} is not positive at x = {x}")]
    NonPositiveMass { x: f64, value: f64 },

    #[error("eigensolver did not converge for eigenvalue #{index} after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        index: usize,
        iterations: usize,
        residual: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
