//! Campaign reports.

use serde::{Deserialize, Serialize};

/// One failed trial: deviation above tolerance or a map error, with the
/// sampled inputs echoed for replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    pub detail: String,
    pub inputs: serde_json::Value,
}

/// Outcome of a verification campaign. Serialization is deterministic for
/// fixed `(family, check, trials, seed, tol)`: `runtime_ms` is only
/// populated for console display, never for output files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: String,
    pub check: String,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub max_deviation: f64,
    pub max_certificate_residual: f64,
    pub failures: Vec<TrialFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.max_deviation <= self.tol
    }

    /// Copy with the runtime stripped, for byte-stable file output.
    pub fn without_runtime(&self) -> Self {
        Self {
            runtime_ms: None,
            ..self.clone()
        }
    }
}
