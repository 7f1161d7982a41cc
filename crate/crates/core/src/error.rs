use thiserror::Error;

/// Errors raised by the geometry, indefinite-form and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input. `path` is a JSON-pointer-style
    /// location when the input came from a document, empty otherwise.
    #[error("validation error{}: {message}", fmt_path(.path))]
    Validation { path: String, message: String },

    #[error("matrix is singular within tolerance (smallest singular value {sigma_min:e})")]
    Singular { sigma_min: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("eigenvalue {eigenvalue:e} outside the domain of {function}")]
    Domain { function: &'static str, eigenvalue: f64 },

    /// The bottom block of a subspace basis is singular, so the subspace meets
    /// the positive summand and is not the graph of a ball point.
    #[error("subspace is not a graph over the negative summand (sigma_min {sigma_min:e})")]
    NotAGraph { sigma_min: f64 },

    #[error("subspace is not negative (graph operator norm {norm})")]
    NotNegative { norm: f64 },

    /// Conditioning breakdown in a formula that is analytically well defined.
    #[error("numerical breakdown: {0}")]
    Numerical(String),

    /// Group closure exceeded its cap.
    #[error("group closure exceeded cap of {cap} elements")]
    NotFinite { cap: usize },

    /// Signature or invariant-subspace data contradicts J-unitarity.
    #[error("inconsistent input: {0}")]
    Inconsistency(String),
}

fn fmt_path(path: &str) -> String {
    if path.is_empty() {
        String::new()
    } else {
        format!(" at {path}")
    }
}

impl Error {
    pub fn validation(message: impl Into<String>) -> Self {
        Error::Validation {
            path: String::new(),
            message: message.into(),
        }
    }

    pub fn validation_at(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Prefix the JSON pointer of a validation error; other variants pass through.
    pub fn under(self, prefix: &str) -> Self {
        match self {
            Error::Validation { path, message } => Error::Validation {
                path: format!("{prefix}{path}"),
                message,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
