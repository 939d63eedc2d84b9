use thiserror::Error;

/// Errors raised by the evaluators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series diverges: |z| = {modulus} is not inside the unit disk and the series does not terminate")]
    Divergent { modulus: f64 },

    #[error("lower parameter c = {c} sits on a pole base^-{index}")]
    PoleInC { c: String, index: i64 },

    #[error("pole guard tripped: {0}")]
    PoleGuard(String),

    #[error("series tail could not be certified below {tol:e} within {max_terms} terms")]
    NotConverged { tol: f64, max_terms: usize },

    #[error("contour node s = {s} leaves the evaluable domain: {reason}")]
    PathOutsideDomain { s: f64, reason: String },

    #[error("quadrature under-resolved: node doubling still moves the value by {change:e} (tolerance {tol:e})")]
    QuadratureUnderResolved { change: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
