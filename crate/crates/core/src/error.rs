use thiserror::Error;

/// Errors raised by model construction, integration and steady-state solving.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("initial state has a negative or non-finite entry at index {index} ({value})")]
    InvalidInitialState { index: usize, value: f64 },

    #[error("invalid time span [{start}, {end}]")]
    InvalidTimeSpan { start: f64, end: f64 },

    #[error("step size underflow at t = {t} (h = {h}); problem may be stiff")]
    StepSizeUnderflow {
        t: f64,
        h: f64,
        last_state: Vec<f64>,
    },

    #[error("non-finite derivative encountered at t = {t}")]
    NonFiniteDerivative { t: f64, last_state: Vec<f64> },

    #[error("dependent block of the expanded system is singular")]
    SingularElimination,

    #[error("singular slice: 1 - a35*r1 vanishes at r1 = {r1}")]
    SingularSlice { r1: f64 },

    #[error("expected a unique positive cubic root at r1 = {r1}, found {count}")]
    CubicRootCount { r1: f64, count: usize },

    #[error("no sign change of the conservation residual on the bracketing scan")]
    NoBracket,

    #[error("root finder did not converge after {iterations} iterations")]
    RootFinderFailed { iterations: usize },

    #[error("Newton polishing did not converge (residual {residual:e})")]
    NewtonFailed { residual: f64, best_state: Vec<f64> },

    #[error("steady state violates the residual contract (residual {residual:e}, conservation error {conservation:e})")]
    ResidualContract { residual: f64, conservation: f64 },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
