//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in psifrac.
///
/// Variants are split between *validation* failures (bad inputs, unknown
/// names, domain violations) and *numeric* failures (a method ran but could
/// not certify its result). [`Error::is_numeric`] gives the classification
/// used for process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("accuracy loss: {0}")]
    AccuracyLoss(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("unknown kind: {0}")]
    UnknownKind(String),

    #[error("tolerance not met: value {value:.6e}, estimated error {est_error:.3e}")]
    ToleranceNotMet { value: f64, est_error: f64 },

    #[error("needs smoothness: {0}")]
    NeedsSmoothness(String),

    #[error("abscissa violation: Re(s) = {s_re} not greater than growth rate c = {c}")]
    AbscissaViolation { s_re: f64, c: f64 },

    #[error("transform-ineligible substitution: {0}")]
    TransformIneligible(String),

    #[error("contour failure: {0}")]
    ContourFailure(String),

    #[error("unbounded growth: {0}")]
    UnboundedGrowth(String),

    #[error("series divergence: {0}")]
    SeriesDivergence(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),
}

impl Error {
    /// True for failures of a numeric method on otherwise valid input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::AccuracyLoss(_)
                | Error::ToleranceNotMet { .. }
                | Error::NeedsSmoothness(_)
                | Error::ContourFailure(_)
                | Error::SeriesDivergence(_)
                | Error::NoConvergence(_)
                | Error::UnboundedGrowth(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
