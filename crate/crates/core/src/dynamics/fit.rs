use serde::{Deserialize, Serialize};

use super::{average_return_classical_dos, TimeGrid, TimeSeries};
use crate::error::{Error, Result};
use crate::spectral::DegeneracySpectrum;

/// Least-squares line through `(ln t, ln y)`: `y ≈ prefactor · t^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub r_squared: f64,
}

/// Ordinary least squares `y = a + b x`, returning `(a, b, r²)`.
pub(crate) fn linear_regression(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Some((my - slope * mx, slope, r2))
}

/// Fits the samples with `t` in `[lo, hi]` and positive values.
pub fn fit_power_law(series: &TimeSeries, window: (f64, f64)) -> Result<PowerLawFit> {
    let (x, y): (Vec<f64>, Vec<f64>) = series
        .times()
        .iter()
        .zip(&series.values)
        .filter(|(t, v)| **t >= window.0 && **t <= window.1 && **t > 0.0 && **v > 0.0)
        .map(|(t, v)| (t.ln(), v.ln()))
        .unzip();
    let points = x.len();
    let (intercept, exponent, r_squared) = linear_regression(&x, &y).ok_or(Error::EmptySeries)?;
    Ok(PowerLawFit {
        exponent,
        prefactor: intercept.exp(),
        window,
        points,
        r_squared,
    })
}

/// Scaling window for `p̄(t)`: from `t = 1` to a tenth of the relaxation
/// time `1/E_2`, where `E_2` is the smallest non-zero level.
pub fn classical_scaling_window(dos: &DegeneracySpectrum) -> Result<(f64, f64)> {
    let gap = dos
        .levels()
        .iter()
        .map(|l| l.energy)
        .find(|&e| e > dos.tolerance())
        .ok_or(Error::EmptySeries)?;
    let hi = 0.1 / gap;
    if hi <= 1.0 {
        return Err(Error::InsufficientDecades {
            decades: hi.log10(),
            required: 0.0,
        });
    }
    Ok((1.0, hi))
}

/// Slope of `log p̄` against `log t`, sampled at 200 logarithmic points over
/// `window` (default [`classical_scaling_window`]). Should approach `-d_s/2`.
pub fn fit_classical_decay(
    dos: &DegeneracySpectrum,
    window: Option<(f64, f64)>,
) -> Result<PowerLawFit> {
    let window = match window {
        Some(w) => w,
        None => classical_scaling_window(dos)?,
    };
    let grid = TimeGrid::logarithmic(window.0, window.1, 200)?;
    let series = average_return_classical_dos(dos, &grid)?;
    fit_power_law(&series, window)
}
