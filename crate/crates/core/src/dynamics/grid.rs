use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum GridScheme {
    Linear,
    Logarithmic,
    /// Arrival times of a Poisson process with the given rate.
    Poissonian { rate: f64, seed: u64 },
    Explicit,
}

/// Sorted, finite, non-negative sampling times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    scheme: GridScheme,
    points: Vec<f64>,
}

impl TimeGrid {
    /// `count` evenly spaced points from `start` to `end` inclusive.
    pub fn linear(start: f64, end: f64, count: usize) -> Result<Self> {
        check_range(start, end, count)?;
        let points = if count == 1 {
            vec![start]
        } else {
            let step = (end - start) / (count - 1) as f64;
            (0..count).map(|i| start + step * i as f64).collect()
        };
        Self::new(GridScheme::Linear, points)
    }

    /// `count` points evenly spaced in `ln t`, `start > 0`.
    pub fn logarithmic(start: f64, end: f64, count: usize) -> Result<Self> {
        check_range(start, end, count)?;
        if start <= 0.0 {
            return Err(Error::InvalidGrid("logarithmic grid needs start > 0".into()));
        }
        let (lo, hi) = (start.ln(), end.ln());
        let points = if count == 1 {
            vec![start]
        } else {
            (0..count)
                .map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp())
                .collect()
        };
        Self::new(GridScheme::Logarithmic, points)
    }

    /// Regular sampling `t_i = i·dt` for `i = 1..=count`.
    pub fn regular(dt: f64, count: usize) -> Result<Self> {
        Self::linear(dt, dt * count as f64, count)
    }

    /// First `count` arrival times of a Poisson process, reproducible from
    /// `seed`.
    pub fn poissonian(rate: f64, count: usize, seed: u64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) || count == 0 {
            return Err(Error::InvalidGrid(
                "Poissonian grid needs a positive rate and count".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let waits = Exp::new(rate).map_err(|e| Error::InvalidGrid(e.to_string()))?;
        let mut t = 0.0;
        let mut points = Vec::with_capacity(count);
        while points.len() < count {
            t += waits.sample(&mut rng);
            // zero-length waits would break strict ordering
            if points.last().is_none_or(|&last| t > last) {
                points.push(t);
            }
        }
        Self::new(GridScheme::Poissonian { rate, seed }, points)
    }

    pub fn explicit(points: Vec<f64>) -> Result<Self> {
        Self::new(GridScheme::Explicit, points)
    }

    /// 400 logarithmic points over `[1e-2, 1e4]`, for scaling plots.
    pub fn default_logarithmic() -> Self {
        Self::logarithmic(1e-2, 1e4, 400).expect("valid default grid")
    }

    /// 4000 linear points over `[0, 200]`, for oscillation plots.
    pub fn default_linear() -> Self {
        Self::linear(0.0, 200.0, 4000).expect("valid default grid")
    }

    fn new(scheme: GridScheme, points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid has no points".into()));
        }
        if points.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidGrid("times must be finite and non-negative".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("times must be strictly increasing".into()));
        }
        Ok(TimeGrid { scheme, points })
    }

    pub fn scheme(&self) -> &GridScheme {
        &self.scheme
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `log10(t_max / t_min)` over the positive points.
    pub fn decades(&self) -> f64 {
        let positive: Vec<f64> = self.points.iter().copied().filter(|&t| t > 0.0).collect();
        match (positive.first(), positive.last()) {
            (Some(lo), Some(hi)) => (hi / lo).log10(),
            _ => 0.0,
        }
    }
}

fn check_range(start: f64, end: f64, count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidGrid("grid needs at least one point".into()));
    }
    if !(start.is_finite() && end.is_finite()) || start < 0.0 || (count > 1 && end <= start) {
        return Err(Error::InvalidGrid(format!(
            "invalid range [{start}, {end}] for {count} points"
        )));
    }
    Ok(())
}
