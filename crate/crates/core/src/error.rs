use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("malformed config: {0}")]
    ConfigSyntax(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "state invariant violated at t = {t}: trace deviation {trace_dev:e}, \
         hermiticity deviation {herm_dev:e}, min eigenvalue {min_eig:e}"
    )]
    InvariantViolation {
        t: f64,
        trace_dev: f64,
        herm_dev: f64,
        min_eig: f64,
    },

    #[error("reduced atomic state is not X-shaped (off-X residual {residual:e})")]
    NotXState { residual: f64 },

    #[error("reduced atomic state has population {value:e} below the positivity tolerance")]
    NegativePopulation { value: f64 },

    #[error("expectation value has imaginary part {imag:e}; operator or state is not Hermitian")]
    NonHermitianExpectation { imag: f64 },

    #[error("integrator step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}
