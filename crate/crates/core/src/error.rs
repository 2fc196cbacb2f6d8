use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate:.6e}, error {error_estimate:.3e} after {subdivisions} subdivisions")]
    Numerical {
        estimate: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    /// Nearest-neighbour assignment into an empty upper layer.
    #[error("cannot assign {lower} points of layer {layer} to an empty upper layer")]
    EmptyUpperLayer { layer: &'static str, lower: usize },

    /// Operating point outside the domain of a model (e.g. SNR below capacity).
    #[error("domain error: {0}")]
    Domain(String),

    /// Every Monte Carlo replication was discarded or too few remained.
    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable category, used by the CLI for exit codes.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parameter { .. } => "parameter",
            Error::Numerical { .. } => "numerical",
            Error::EmptyUpperLayer { .. } => "assignment",
            Error::Domain(_) => "domain",
            Error::Estimation(_) => "estimation",
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
        }
    }
}

pub(crate) fn ensure_finite_nonneg(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::parameter(name, format!("must be finite and >= 0, got {value}")))
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::parameter(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn ensure_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::parameter(name, format!("must lie in [0, 1], got {value}")))
    }
}
