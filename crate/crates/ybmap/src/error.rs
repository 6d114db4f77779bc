//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: vector has {vector} entries, covector has {covector}")]
    LengthMismatch { vector: usize, covector: usize },

    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("degenerate pairing: |(xi, eta)| = {magnitude:.3e} at threshold {threshold:.3e}")]
    DegeneratePairing { magnitude: f64, threshold: f64 },

    #[error("parameter collision: lambda1 = {lambda1}, lambda2 = {lambda2}")]
    ParameterCollision {
        lambda1: Complex64,
        lambda2: Complex64,
    },

    #[error("spectral velocity lambda must be nonzero")]
    ZeroLambda,

    #[error("subspaces not complementary in {context}: condition sigma_min/sigma_max = {condition:.3e}")]
    NotComplementary { context: String, condition: f64 },

    #[error("rank-deficient basis: numeric rank {found}, expected {expected}")]
    RankDeficient { found: usize, expected: usize },

    #[error("extracted subspace dimension {detected} disagrees with expected rank {expected}")]
    RankMismatch { expected: usize, detected: usize },

    #[error("matrix not idempotent: ||P^2 - P|| = {defect:.3e} exceeds {threshold:.3e}")]
    NotIdempotent { defect: f64, threshold: f64 },

    #[error("spectral parameter {zeta} within margin {margin:.3e} of pole {pole}")]
    PoleEvaluation {
        zeta: Complex64,
        pole: Complex64,
        margin: f64,
    },

    #[error("chain site {site}: {source}")]
    AtSite {
        site: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("transfer step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Attach a chain site index to an error raised while updating that site.
    pub fn at_site(self, site: usize) -> Self {
        Error::AtSite {
            site,
            source: Box::new(self),
        }
    }

    /// Attach a transfer step index.
    pub fn at_step(self, step: usize) -> Self {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }

    /// True when the error reports a violated mathematical precondition
    /// rather than malformed input.
    pub fn is_precondition(&self) -> bool {
        match self {
            Error::DegeneratePairing { .. }
            | Error::ParameterCollision { .. }
            | Error::ZeroLambda
            | Error::NotComplementary { .. }
            | Error::RankDeficient { .. }
            | Error::RankMismatch { .. }
            | Error::NotIdempotent { .. }
            | Error::PoleEvaluation { .. } => true,
            Error::AtSite { source, .. } | Error::AtStep { source, .. } => {
                source.is_precondition()
            }
            _ => false,
        }
    }
}
