use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("quadrature did not converge (estimate {estimate:e}, error bound {error_bound:e})")]
    Numerical { estimate: f64, error_bound: f64 },

    #[error("root is not bracketed: g({lo}) = {g_lo:e}, g({hi}) = {g_hi:e}")]
    Bracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("model error: {0}")]
    Model(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("at separation {delta}: {source}")]
    AtSeparation {
        delta: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at_separation(self, delta: f64) -> Self {
        Error::AtSeparation {
            delta,
            source: Box::new(self),
        }
    }

    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Numerical { .. } | Error::Bracket { .. } | Error::Degenerate(_) => true,
            Error::AtSeparation { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
