use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("momentum vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("negative radius {0}")]
    NegativeRadius(f64),

    #[error("occupation denominator non-positive at energy {energy}: factor {factor} <= q {q}")]
    DenominatorNonPositive { energy: f64, factor: f64, q: f64 },

    #[error("chemical potential {mu} is super-critical (critical value {mu_q})")]
    SuperCritical { mu: f64, mu_q: f64 },

    #[error("operation requires q in (0, 1], got {0}")]
    QSignInvalid(f64),

    #[error("local inverse temperature diverges at the bottom of the spectrum")]
    UnboundedAtZero,

    #[error("mu {mu} is at or above the finite-volume bound {bound}")]
    SuperCriticalFiniteVolume { mu: f64, bound: f64 },

    #[error("mode cutoff {cutoff} leaves a truncation tail above 1e-12 of the retained sum")]
    CutoffInsufficient { cutoff: usize },

    #[error("matrix is not orthogonal (max deviation {0:.3e})")]
    NotOrthogonal(f64),

    #[error("{0}")]
    DomainViolation(String),

    #[error("pointwise precondition could not be verified: {0}")]
    PreconditionUnverified(String),

    #[error("full pairings are limited to d <= 3, got d = {0}")]
    UnsupportedDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
