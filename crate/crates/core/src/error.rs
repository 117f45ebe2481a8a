use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Gamma-function pole at argument {arg}")]
    Pole { arg: f64 },

    #[error("sigma must be nonzero: the calculus is only defined for sigma != 0")]
    InvalidSigma,

    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),

    #[error("kernel exponent Re(-mu-n) = {exponent} is below 1; the quadrature route needs an absolutely convergent kernel")]
    ConvergenceRegime { exponent: f64 },

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("coefficient vector has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("degree {degree} is not available (must be even and <= {l_max})")]
    DegreeOutOfRange { degree: u32, l_max: u32 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid symbol file: field `{field}`: {reason}")]
    Format { field: String, reason: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
