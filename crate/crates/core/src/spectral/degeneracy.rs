use serde::{Deserialize, Serialize};

use super::SpectralDecomposition;
use crate::error::{Error, Result};

/// Default gap below which neighbouring eigenvalues are treated as one
/// degenerate level: `max(1e-8, 1e-12·E_max)`.
pub fn default_tolerance(max_eigenvalue: f64) -> f64 {
    1e-8f64.max(1e-12 * max_eigenvalue.abs())
}

/// One distinct eigenvalue and its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    /// Mean of the clustered eigenvalues.
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "D")]
    pub degeneracy: usize,
    pub rho: f64,
}

/// Distinct eigenvalues with their normalized degeneracies `ρ(E) = D(E)/N`,
/// i.e. the weights of the discrete density of states.
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracySpectrum {
    levels: Vec<Level>,
    node_count: usize,
    tolerance: f64,
}

impl DegeneracySpectrum {
    /// Builds levels directly, e.g. from a known analytic spectrum.
    pub fn from_levels(levels: Vec<(f64, usize)>, tolerance: f64) -> Result<Self> {
        let node_count: usize = levels.iter().map(|l| l.1).sum();
        if node_count == 0 || levels.iter().any(|l| l.1 == 0) {
            return Err(Error::InvalidParameter("levels need positive degeneracies".into()));
        }
        if levels.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidParameter("level energies must increase".into()));
        }
        let levels = levels
            .into_iter()
            .map(|(energy, degeneracy)| Level {
                energy,
                degeneracy,
                rho: degeneracy as f64 / node_count as f64,
            })
            .collect();
        Ok(DegeneracySpectrum {
            levels,
            node_count,
            tolerance,
        })
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// The level within the clustering tolerance of `energy`, if any.
    pub fn level_at(&self, energy: f64) -> Option<&Level> {
        let tol = self.tolerance.max(1e-12);
        self.levels
            .iter()
            .filter(|l| (l.energy - energy).abs() <= tol)
            .min_by(|a, b| {
                (a.energy - energy)
                    .abs()
                    .total_cmp(&(b.energy - energy).abs())
            })
    }

    /// `D(E)`, zero when `energy` is not an eigenvalue.
    pub fn degeneracy_at(&self, energy: f64) -> usize {
        self.level_at(energy).map_or(0, |l| l.degeneracy)
    }

    /// `ρ(E)`, zero when `energy` is not an eigenvalue.
    pub fn rho_at(&self, energy: f64) -> f64 {
        self.degeneracy_at(energy) as f64 / self.node_count as f64
    }

    /// Level energy snapped to the nearest integer when it lies within the
    /// clustering tolerance of one. Reporting only.
    pub fn snapped_energy(&self, level: &Level) -> f64 {
        let rounded = level.energy.round();
        if (level.energy - rounded).abs() <= self.tolerance {
            rounded
        } else {
            level.energy
        }
    }

    /// Levels ordered by decreasing degeneracy, ties by energy.
    pub fn most_degenerate(&self) -> Vec<Level> {
        let mut sorted = self.levels.clone();
        sorted.sort_by(|a, b| {
            b.degeneracy
                .cmp(&a.degeneracy)
                .then(a.energy.total_cmp(&b.energy))
        });
        sorted
    }
}

/// Merges ascending eigenvalues whose successive gaps are below `tol`.
pub fn degeneracies(spec: &SpectralDecomposition, tol: f64) -> DegeneracySpectrum {
    let values = spec.eigenvalues();
    let n = values.len();
    let mut levels = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || values[i] - values[i - 1] >= tol {
            let cluster = &values[start..i];
            let energy = cluster.iter().sum::<f64>() / cluster.len() as f64;
            levels.push(Level {
                energy,
                degeneracy: cluster.len(),
                rho: cluster.len() as f64 / n as f64,
            });
            start = i;
        }
    }
    DegeneracySpectrum {
        levels,
        node_count: n,
        tolerance: tol,
    }
}

/// [`degeneracies`] with [`default_tolerance`].
pub fn degeneracies_default(spec: &SpectralDecomposition) -> DegeneracySpectrum {
    degeneracies(spec, default_tolerance(spec.max_eigenvalue()))
}

/// Long-time average of the return-amplitude lower bound, `Σ_m ρ(E_m)²`.
pub fn chi_lb(dos: &DegeneracySpectrum) -> f64 {
    dos.levels.iter().map(|l| l.rho * l.rho).sum()
}

/// Normalized cumulative eigenvalue counting function
/// `𝒩(x) = #{n : E_n / E_max ≤ x} / N` evaluated on `xs`.
pub fn counting_function(spec: &SpectralDecomposition, xs: &[f64]) -> Vec<f64> {
    let values = spec.eigenvalues();
    let n = values.len() as f64;
    let emax = spec.max_eigenvalue();
    let scaled: Vec<f64> = if emax > 0.0 {
        values.iter().map(|e| e / emax).collect()
    } else {
        vec![0.0; values.len()]
    };
    xs.iter()
        .map(|&x| {
            // scaled is ascending; count entries ≤ x, treating roundoff
            // around the zero mode and the top eigenvalue as exact.
            let bound = x + 1e-12;
            scaled.partition_point(|&s| s <= bound) as f64 / n
        })
        .collect()
}
