use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index set has more than {cap} elements")]
    CapExceeded { cap: usize },

    #[error("integer overflow while counting {what}")]
    Overflow { what: &'static str },

    #[error("evaluator returned {value} at {point:?}")]
    Evaluator { point: Vec<f64>, value: f64 },

    #[error("point {point:?} lies outside [-1, 1]^s")]
    OutsideDomain { point: Vec<f64> },

    #[error("aliasing guard: degree {n} needs base resolution at least {required}, got {base_n}")]
    Aliasing { n: usize, base_n: usize, required: usize },

    #[error("rate fit needs at least {needed} usable records, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A proven inequality or identity failed numerically. Never expected;
    /// indicates an implementation bug.
    #[error("check falsified: {0}")]
    Falsified(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
