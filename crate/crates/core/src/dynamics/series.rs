use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::TimeGrid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observable {
    /// Classical transition probability `p_{k,j}(t)`.
    #[serde(rename = "p_kj")]
    ClassicalTransition,
    /// Quantum transition probability `π_{k,j}(t)`.
    #[serde(rename = "pi_kj")]
    QuantumTransition,
    #[serde(rename = "p_bar")]
    ClassicalAverage,
    /// `|ᾱ(t)|²`, lower bound of the quantum average return probability.
    #[serde(rename = "alpha_bound")]
    AlphaBound,
    #[serde(rename = "pi_bar")]
    QuantumAverage,
    /// Single-level approximation of `|ᾱ(t)|²`.
    #[serde(rename = "dominant_approx")]
    DominantApprox,
    #[serde(rename = "survival_q")]
    QuantumSurvival,
    #[serde(rename = "survival_cl")]
    ClassicalSurvival,
}

impl Observable {
    pub fn label(self) -> &'static str {
        match self {
            Self::ClassicalTransition => "p_kj",
            Self::QuantumTransition => "pi_kj",
            Self::ClassicalAverage => "p_bar",
            Self::AlphaBound => "alpha_bound",
            Self::QuantumAverage => "pi_bar",
            Self::DominantApprox => "dominant_approx",
            Self::QuantumSurvival => "survival_q",
            Self::ClassicalSurvival => "survival_cl",
        }
    }

    /// Whether values must lie in `[0, 1]`.
    pub fn is_probability(self) -> bool {
        // the single-level approximation is not a probability
        !matches!(self, Self::DominantApprox)
    }
}

/// Sampled scalar observable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub observable: Observable,
}

/// Slack allowed above 1 for probabilities.
pub const PROBABILITY_SLACK: f64 = 1e-9;

impl TimeSeries {
    pub fn new(grid: TimeGrid, values: Vec<f64>, observable: Observable) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::ConvergenceFailure);
        }
        Ok(TimeSeries {
            grid,
            values,
            observable,
        })
    }

    pub fn times(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when a probability observable stays within `[-slack, 1 + slack]`.
    pub fn within_probability_bounds(&self) -> bool {
        !self.observable.is_probability()
            || self
                .values
                .iter()
                .all(|&v| (-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&v))
    }

    /// Trapezoidal mean over the sampled window.
    pub fn time_average(&self) -> f64 {
        let t = self.times();
        if t.len() < 2 {
            return self.values.first().copied().unwrap_or(0.0);
        }
        let area: f64 = t
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(tw, vw)| 0.5 * (tw[1] - tw[0]) * (vw[0] + vw[1]))
            .sum();
        area / (t[t.len() - 1] - t[0])
    }

    /// `t,value` CSV, one row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (t, v) in self.times().iter().zip(&self.values) {
            let _ = writeln!(out, "{t},{v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let grid = TimeGrid::explicit(vec![0.0, 0.5]).unwrap();
        let s = TimeSeries::new(grid, vec![1.0, 0.25], Observable::ClassicalAverage).unwrap();
        assert_eq!(s.to_csv(), "t,value\n0,1\n0.5,0.25\n");
    }

    #[test]
    fn trapezoid_average() {
        let grid = TimeGrid::linear(0.0, 2.0, 3).unwrap();
        let s = TimeSeries::new(grid, vec![0.0, 1.0, 0.0], Observable::AlphaBound).unwrap();
        assert!((s.time_average() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_mismatch_and_nan() {
        let grid = TimeGrid::explicit(vec![0.0, 0.5]).unwrap();
        assert!(TimeSeries::new(grid.clone(), vec![1.0], Observable::AlphaBound).is_err());
        assert!(TimeSeries::new(grid, vec![1.0, f64::NAN], Observable::AlphaBound).is_err());
    }

    #[test]
    fn labels_serialize() {
        let json = serde_json::to_string(&Observable::QuantumSurvival).unwrap();
        assert_eq!(json, "\"survival_q\"");
        assert_eq!(Observable::QuantumSurvival.label(), "survival_q");
    }
}
