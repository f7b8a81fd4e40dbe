use thiserror::Error;

/// Errors raised by the numerical engine, the expression family and the
/// prescription layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The integrand returned a non-finite value.
    #[error("non-finite integrand value at {point}")]
    Evaluation { point: f64 },

    /// The adaptive quadrature ran out of panels before meeting its tolerance.
    #[error(
        "quadrature did not converge: best value {best} with error estimate {error_est} after {panels} panels"
    )]
    Convergence {
        best: f64,
        error_est: f64,
        panels: usize,
    },

    /// No sign change of the root function was found on the scan grid.
    #[error("root search failed: {0}")]
    SearchFailure(String),

    /// An argument cannot be represented in double precision.
    #[error("range error: {0}")]
    Range(String),

    /// The expression does not support the requested operation.
    #[error("unsupported expression: {0}")]
    Unsupported(String),

    /// The average-band target violates `p + q = α + β`.
    #[error("symmetry condition p+q=α+β violated: p+q = {lhs}, α+β = {rhs}")]
    Symmetry { lhs: f64, rhs: f64 },

    /// The target is covered by an earlier construction and not by this library.
    #[error("out of scope: {0}")]
    OutOfScope(String),

    /// The probe window could not cover the requested number of periods.
    #[error(
        "partial band: covered {periods_covered:.3} periods, band [{lower}, {upper}], time capped at {t_cap:e}"
    )]
    PartialBand {
        lower: f64,
        upper: f64,
        periods_covered: f64,
        t_cap: f64,
    },

    /// Malformed serialized document.
    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::Evaluation { .. }
                | Error::SearchFailure(_)
                | Error::PartialBand { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
