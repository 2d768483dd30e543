use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function being evaluated.
    #[error("domain error in {function}: {reason} (got {value})")]
    Domain {
        function: &'static str,
        reason: &'static str,
        value: f64,
    },

    /// A molecule or configuration field breaks an invariant.
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    /// The dynamical force was requested too close to the back-reaction light cone.
    #[error(
        "evaluation point is within the light-cone guard band (|omega_k t - 2 k_k d| = {distance:.3e} < {guard:.0e})"
    )]
    LightCone { distance: f64, guard: f64 },

    /// A series, continued fraction or quadrature failed to reach its tolerance.
    #[error("{what} did not converge: {detail}")]
    Convergence { what: &'static str, detail: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn domain(function: &'static str, reason: &'static str, value: f64) -> Self {
        Error::Domain {
            function,
            reason,
            value,
        }
    }

    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
