use crate::geometry::ChartId;

/// Errors raised by the geometry toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the function or chart.
    #[error("{field} = {value} is outside the domain ({constraint})")]
    Domain {
        field: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error(
        "quadrature did not converge: estimated error {achieved:e} exceeds tolerance {requested:e}"
    )]
    Quadrature {
        estimate: f64,
        achieved: f64,
        requested: f64,
    },

    /// A matrix that must be inverted is singular or not positive definite.
    #[error("singular {what} (determinant {det:e})")]
    Singular { what: &'static str, det: f64 },

    #[error("no chart map from {from} to {to}")]
    UnsupportedProjection { from: ChartId, to: ChartId },

    #[error("expected a field on chart {expected}, got {found}")]
    ChartMismatch { expected: ChartId, found: ChartId },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Domain {
            field,
            value,
            constraint,
        }
    }

    /// Name of the offending argument, when the error is tied to one.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            Error::Domain { field, .. } => Some(field),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn require_finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(field, value, "must be finite"))
    }
}

pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(field, value, "must be positive and finite"))
    }
}
