use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A numeric input violates the precondition of the operation that owns it.
    #[error("invalid `{field}`: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("position {radius:e} is inside the near-singular guard {guard:e} around the origin")]
    SingularOrigin { radius: f64, guard: f64 },

    #[error("degenerate orbit: {0}")]
    DegenerateOrbit(String),

    #[error("step size collapsed to {step:e} at t = {t:e} (floor {floor:e})")]
    StepCollapse { t: f64, step: f64, floor: f64 },

    #[error("found {found} perihelion passages, need at least {needed}")]
    TooFewPassages { found: usize, needed: usize },

    #[error("ambiguous radial minimum: {0}")]
    AmbiguousMinimum(String),

    #[error("analytic shift {shift:e} rad/rev is outside the perturbative regime (|shift| < {limit})")]
    NonPerturbative { shift: f64, limit: f64 },

    #[error(
        "inconsistent mass scaling: particle `{label}` has (A, B) = ({a:e}, {b:e}), expected ({a_ref:e}, {b_ref:e})"
    )]
    InconsistentScaling {
        label: String,
        a: f64,
        b: f64,
        a_ref: f64,
        b_ref: f64,
    },

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("missing required key `{key}` in {source_name}")]
    MissingKey { source_name: String, key: String },

    #[error("unknown key `{key}` in {source_name}:{line}")]
    UnknownKey {
        source_name: String,
        line: usize,
        key: String,
    },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput { .. }
                | Error::Parse { .. }
                | Error::MissingKey { .. }
                | Error::UnknownKey { .. }
                | Error::Io { .. }
        )
    }
}
