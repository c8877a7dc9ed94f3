use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A distribution parameter is outside its valid domain.
    #[error("invalid parameter {name} = {value}: {reason}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// An operation argument is outside its valid domain.
    #[error("{0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    /// A point lies on or outside the support of a chain factor, so it has
    /// no finite image in standard normal space.
    #[error("point is on or outside the support of dimension {dim} ({name}) at x = {x}")]
    Boundary { dim: usize, name: String, x: f64 },

    #[error("numeric failure in {what}: {detail}")]
    Numeric { what: &'static str, detail: String },

    #[error(
        "grid truncates {missing:.3e} of probability mass, must be below alpha/10 = {limit:.3e}; enlarge the grid bounds"
    )]
    GridCoverage { missing: f64, limit: f64 },

    #[error("grid needs about {needed} bytes, above the cap of {cap} bytes")]
    Resource { needed: u64, cap: u64 },

    #[error("{what} is only supported for {supported} dimensions, model has {got}")]
    UnsupportedDimension {
        what: &'static str,
        supported: usize,
        got: usize,
    },

    #[error(
        "alpha * n = {expected:.3} exceedances is below 1; use at least {recommended} samples"
    )]
    InsufficientSamples { expected: f64, recommended: usize },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("invalid config field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Coarse error category, mapped onto process exit codes by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Io,
    Parse,
    Validation,
    Numeric,
    Resource,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Io => 1,
            ErrorClass::Parse => 2,
            ErrorClass::Validation => 3,
            ErrorClass::Numeric => 4,
            ErrorClass::Resource => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorClass::Io => "io",
            ErrorClass::Parse => "parse",
            ErrorClass::Validation => "validation",
            ErrorClass::Numeric => "numeric",
            ErrorClass::Resource => "resource",
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io(_) => ErrorClass::Io,
            Error::Parse(_) => ErrorClass::Parse,
            Error::Validation { .. }
            | Error::ParameterDomain { .. }
            | Error::Domain(_)
            | Error::Shape { .. }
            | Error::UnsupportedDimension { .. }
            | Error::InsufficientSamples { .. } => ErrorClass::Validation,
            Error::Boundary { .. } | Error::Numeric { .. } | Error::GridCoverage { .. } => {
                ErrorClass::Numeric
            }
            Error::Resource { .. } => ErrorClass::Resource,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
