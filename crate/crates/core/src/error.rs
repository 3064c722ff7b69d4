use thiserror::Error;

/// Errors produced anywhere in the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible distinguishability bases: dimension {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} is not normalized: squared norm {norm_sq} (tolerance {tol:e})")]
    NotNormalized {
        what: &'static str,
        norm_sq: f64,
        tol: f64,
    },

    #[error("distinguishability vector must have dimension >= 1")]
    EmptyDistVector,

    #[error("unsupported spin configuration: expected (up, down), got ({first:?}, {second:?})")]
    UnsupportedSpins {
        first: crate::Spin,
        second: crate::Spin,
    },

    #[error("state contains bunched (LL or RR) or non-detector terms; post-select one particle per detector first")]
    NotPostSelected,

    #[error("no post-selection support: density matrix weight is zero")]
    NoPostSelectionSupport,

    #[error("overlap magnitude {0} exceeds 1")]
    OverlapOutOfRange(f64),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative rate {rate} at delay {delay_um} um")]
    NegativeRate { delay_um: f64, rate: f64 },

    #[error("no dip detected")]
    NoDipDetected,

    #[error("fit did not converge after {iterations} iterations")]
    FitNotConverged {
        iterations: usize,
        best: Box<crate::optics::DipFit>,
    },

    #[error("estimator failed on Monte Carlo run {run}: {source}")]
    EstimatorFailed { run: usize, source: Box<Error> },

    #[error("number distribution probabilities sum to {sum}, expected 1")]
    InvalidProbabilities { sum: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
