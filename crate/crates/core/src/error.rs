use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid degrees of freedom: {0}")]
    InvalidDof(String),

    #[error("argument {value} is outside the support of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("probability {0} is outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("tail probability {0} is below the representable floor; quantile would underflow")]
    TailUnderflow(f64),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("iteration failed to converge: {0}")]
    ConvergenceFailure(&'static str),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("sample is empty")]
    EmptySample,

    #[error("sample too small: need at least {need} values, got {got}")]
    SampleTooSmall { need: usize, got: usize },

    #[error("degenerate sample: {0}")]
    DegenerateSample(&'static str),

    #[error("missing nuisance parameter: {0}")]
    MissingNuisance(String),

    #[error("parameter region is empty: {0}")]
    EmptyRegion(String),

    #[error("invalid level {0}: must lie in (0, 1)")]
    InvalidLevel(f64),

    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),

    #[error("truth violates the null hypothesis: {0}")]
    NullViolated(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub(crate) fn check_level(level: f64) -> Result<f64> {
    if level > 0.0 && level < 1.0 {
        Ok(level)
    } else {
        Err(Error::InvalidLevel(level))
    }
}
