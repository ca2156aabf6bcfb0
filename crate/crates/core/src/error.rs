use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("possible division by zero; refine operand")]
    PossibleDivisionByZero,

    #[error("not isolating: {0}")]
    NotIsolating(String),

    #[error("root on or near circle; re-choose radius")]
    RootOnCircle,

    #[error("root on boundary; perturb box")]
    RootOnBoundary,

    /// A refinement loop hit its configured ceiling.
    #[error("refinement ceiling exceeded in {stage}: {detail}")]
    RefinementLimit { stage: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A construction invariant was violated; indicates a bug upstream.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("step {step} failed: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::PossibleDivisionByZero => "possible_division_by_zero",
            Error::NotIsolating(_) => "not_isolating",
            Error::RootOnCircle => "root_on_circle",
            Error::RootOnBoundary => "root_on_boundary",
            Error::RefinementLimit { .. } => "refinement_limit",
            Error::Parse(_) => "parse",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Internal(_) => "internal",
            Error::Step { source, .. } => source.code(),
        }
    }

    pub(crate) fn limit(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::RefinementLimit {
            stage,
            detail: detail.into(),
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Self {
        match self {
            e @ Error::Step { .. } => e,
            e => Error::Step {
                step,
                source: Box::new(e),
            },
        }
    }
}
