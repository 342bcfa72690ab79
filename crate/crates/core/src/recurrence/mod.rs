//! Pólya-number estimates and return-probability decay exponents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    average_return_classical_dos, classical_scaling_window, fit_power_law, linear_regression,
    GridScheme, PowerLawFit, TimeGrid, TimeSeries,
};
use crate::error::{Error, Result};
use crate::spectral::DegeneracySpectrum;

/// Minimum span of the sampling grid, in decades.
pub const MIN_DECADES: f64 = 3.0;
/// Rounding allowance on the span check, so `[1, 10^3]` qualifies.
const DECADE_SLACK: f64 = 1e-9;
/// Minimum number of local maxima for an envelope fit.
pub const MIN_MAXIMA: usize = 20;

/// `1 − Π_{i<M} (1 − π(t_i))` over the first `m` samples.
pub fn polya_partial_product(series: &TimeSeries, m: usize) -> Result<f64> {
    if m == 0 || series.is_empty() {
        return Err(Error::EmptySeries);
    }
    if m > series.len() {
        return Err(Error::InvalidParameter(format!(
            "{m} samples requested from a series of {}",
            series.len()
        )));
    }
    let survival: f64 = series.values[..m]
        .iter()
        .map(|p| 1.0 - p.clamp(0.0, 1.0))
        .product();
    Ok(1.0 - survival)
}

/// Partial products for `M = 1..=len`, non-decreasing.
pub fn polya_partial_curve(series: &TimeSeries) -> Vec<f64> {
    let mut survival = 1.0;
    series
        .values
        .iter()
        .map(|p| {
            survival *= 1.0 - p.clamp(0.0, 1.0);
            1.0 - survival
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Recurrent,
    Transient,
    Inconclusive,
}

impl Classification {
    /// Decides from a confidence interval on `δ`; the critical value is 1.
    pub fn from_interval(lo: f64, hi: f64) -> Self {
        if hi <= 1.0 {
            Classification::Recurrent
        } else if lo > 1.0 {
            Classification::Transient
        } else {
            Classification::Inconclusive
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub seed: u64,
    /// Two-sided confidence level, e.g. 0.95.
    pub level: f64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            resamples: 1000,
            seed: 0x5eed,
            level: 0.95,
        }
    }
}

/// Envelope decay exponent `δ` in `π(t) ~ f(t)·t^{-δ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    pub delta_hat: f64,
    pub ci: (f64, f64),
    pub maxima: usize,
    pub decades: f64,
}

impl DeltaEstimate {
    pub fn classification(&self) -> Classification {
        Classification::from_interval(self.ci.0, self.ci.1)
    }
}

/// Indices of strict local maxima with positive time and value.
fn strict_maxima(series: &TimeSeries) -> Vec<usize> {
    let (t, v) = (series.times(), &series.values);
    (1..v.len().saturating_sub(1))
        .filter(|&i| v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > 0.0 && t[i] > 0.0)
        .collect()
}

pub fn estimate_delta(series: &TimeSeries) -> Result<DeltaEstimate> {
    estimate_delta_with(series, BootstrapConfig::default())
}

/// Fits `ln π = c − δ ln t` through the strict local maxima and bootstraps
/// the maxima (resampling pairs) for a percentile interval.
pub fn estimate_delta_with(series: &TimeSeries, config: BootstrapConfig) -> Result<DeltaEstimate> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let decades = series.grid.decades();
    if decades < MIN_DECADES - DECADE_SLACK {
        return Err(Error::InsufficientDecades {
            decades,
            required: MIN_DECADES,
        });
    }
    let peaks = strict_maxima(series);
    if peaks.len() < MIN_MAXIMA {
        return Err(Error::TooFewMaxima {
            found: peaks.len(),
            required: MIN_MAXIMA,
        });
    }
    let x: Vec<f64> = peaks.iter().map(|&i| series.times()[i].ln()).collect();
    let y: Vec<f64> = peaks.iter().map(|&i| series.values[i].ln()).collect();
    let (_, slope, _) = linear_regression(&x, &y).ok_or(Error::ConvergenceFailure)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut bx = vec![0.0; x.len()];
    let mut by = vec![0.0; y.len()];
    let mut deltas = Vec::with_capacity(config.resamples);
    for _ in 0..config.resamples {
        for (sx, sy) in bx.iter_mut().zip(by.iter_mut()) {
            let k = rng.random_range(0..x.len());
            *sx = x[k];
            *sy = y[k];
        }
        // degenerate resamples (all abscissae equal) carry no slope information
        if let Some((_, s, _)) = linear_regression(&bx, &by) {
            deltas.push(-s);
        }
    }
    let delta_hat = -slope;
    let ci = if deltas.is_empty() {
        (delta_hat, delta_hat)
    } else {
        deltas.sort_by(f64::total_cmp);
        let tail = (1.0 - config.level) / 2.0;
        (quantile(&deltas, tail), quantile(&deltas, 1.0 - tail))
    };
    Ok(DeltaEstimate {
        delta_hat,
        ci,
        maxima: peaks.len(),
        decades,
    })
}

/// Linear-interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Finite-size recurrence report for a sampled return probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceVerdict {
    pub delta_hat: f64,
    pub ci: (f64, f64),
    #[serde(rename = "M")]
    pub m: usize,
    pub scheme: GridScheme,
    pub polya_partial: f64,
    pub classification: Classification,
}

impl RecurrenceVerdict {
    pub fn assess(series: &TimeSeries, config: BootstrapConfig) -> Result<Self> {
        let estimate = estimate_delta_with(series, config)?;
        Ok(RecurrenceVerdict {
            delta_hat: estimate.delta_hat,
            ci: estimate.ci,
            m: series.len(),
            scheme: series.grid.scheme().clone(),
            polya_partial: polya_partial_product(series, series.len())?,
            classification: estimate.classification(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Fitted classical scaling against the expected spectral dimension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCheck {
    pub fit: PowerLawFit,
    pub fitted_spectral_dimension: f64,
    pub expected_spectral_dimension: f64,
    /// `|slope| < 1`, i.e. `d_s < 2`.
    pub recurrent: bool,
}

/// Samples `p̄(t)` on `grid`, fits its log-log slope over `window`
/// (default: the scaling window clipped to the grid), and converts it to a
/// spectral dimension `d_s = −2·slope`.
pub fn classical_recurrence_check(
    dos: &DegeneracySpectrum,
    expected_spectral_dimension: f64,
    grid: &TimeGrid,
    window: Option<(f64, f64)>,
) -> Result<ClassicalCheck> {
    let decades = grid.decades();
    if decades < MIN_DECADES - DECADE_SLACK {
        return Err(Error::InsufficientDecades {
            decades,
            required: MIN_DECADES,
        });
    }
    let window = match window {
        Some(w) => w,
        None => {
            let (lo, hi) = classical_scaling_window(dos)?;
            let t = grid.points();
            (lo.max(t[0]), hi.min(t[t.len() - 1]))
        }
    };
    let series = average_return_classical_dos(dos, grid)?;
    let fit = fit_power_law(&series, window)?;
    Ok(ClassicalCheck {
        fit,
        fitted_spectral_dimension: -2.0 * fit.exponent,
        expected_spectral_dimension,
        recurrent: fit.exponent.abs() < 1.0,
    })
}
