use thiserror::Error;

use crate::minimize::FlowOutcome;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the range where the operation is defined.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The frequency is at or below the existence threshold of the branch.
    #[error("no standing wave: omega = {omega} must exceed {threshold}")]
    NoState { omega: f64, threshold: f64 },

    /// The asymmetric delta-prime branch only exists above its bifurcation point.
    #[error("below bifurcation: omega = {omega} must exceed {threshold}")]
    BelowBifurcation { omega: f64, threshold: f64 },

    #[error("invalid dipole parameter tau = {0} (tau must not be 0 or +-1)")]
    InvalidTau(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("profile tail {tail:e} at the truncation boundary exceeds 1e-12")]
    TailTooFat { tail: f64 },

    #[error("grid function violates the form-domain constraint: {0}")]
    ConstraintViolation(String),

    #[error("transcendental solve failed: {0}")]
    SolveFailed(String),

    #[error("gradient flow did not converge after {} iterations", .0.iterations)]
    NoConvergence(Box<FlowOutcome>),

    #[error("energy drifted by {drift:e} (relative) at t = {time}; reduce dt")]
    StepUnstable { time: f64, drift: f64 },

    #[error("wave content reached the domain walls at t = {time} (tail mass {tail_mass:e})")]
    TailReached { time: f64, tail_mass: f64 },
}

impl Error {
    /// True for errors caused by inadmissible inputs rather than numerical failure.
    pub fn is_domain_error(&self) -> bool {
        !matches!(
            self,
            Error::NoConvergence(_) | Error::SolveFailed(_) | Error::StepUnstable { .. }
        )
    }
}
