use serde::{Deserialize, Serialize};

use super::{survival_asymptotic, ComplexSpectrum, Sensitivity, TrapConfig};
use crate::error::Result;

/// Summary of a trapping run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapReport {
    pub scheme: String,
    pub gamma: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "N0")]
    pub n0: usize,
    pub pi_inf: f64,
    pub threshold: f64,
    pub sensitivity: Sensitivity,
    /// Threshold-free count, when computed.
    #[serde(rename = "N0_exact", skip_serializing_if = "Option::is_none", default)]
    pub n0_exact: Option<usize>,
}

impl TrapReport {
    pub fn new(config: &TrapConfig, spectrum: &ComplexSpectrum, n0_exact: Option<usize>) -> Self {
        TrapReport {
            scheme: config.scheme.label().to_string(),
            gamma: config.gamma,
            n: spectrum.dim(),
            n0: spectrum.n0(),
            pi_inf: survival_asymptotic(spectrum),
            threshold: spectrum.zero_threshold(),
            sensitivity: spectrum.sensitivity(),
            n0_exact,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
