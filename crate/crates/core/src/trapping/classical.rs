use faer::Side;

use super::TrapConfig;
use crate::dynamics::{Observable, TimeGrid, TimeSeries};
use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::spectral::SolverBudget;

/// Relaxation modes of `T_eff = −(A + Γ Σ_m |m⟩⟨m|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalTrapSpectrum {
    /// Decay rates `λ_n`, ascending.
    pub eigenvalues: Vec<f64>,
    /// `|Σ_j ⟨j|Ψ_n⟩|²`.
    pub weights: Vec<f64>,
}

impl ClassicalTrapSpectrum {
    /// Slowest decay rate, governing the long-time tail of `P(t)`.
    pub fn min_rate(&self) -> f64 {
        self.eigenvalues[0]
    }
}

pub fn classical_trap_spectrum(laplacian: &Laplacian, config: &TrapConfig) -> Result<ClassicalTrapSpectrum> {
    config.check_dim(laplacian.dim())?;
    let n = laplacian.dim();
    let limit = SolverBudget::default().max_with_vectors;
    if n > limit {
        return Err(Error::BudgetExceeded {
            what: "eigenvector",
            n,
            limit,
        });
    }
    let mut m = laplacian.to_faer();
    for &t in config.trap_nodes() {
        m[(t, t)] += config.gamma;
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::ConvergenceFailure)?;
    let eigenvalues: Vec<f64> = evd.S().column_vector().iter().copied().collect();
    let u = evd.U();
    let weights = (0..n)
        .map(|k| {
            let s: f64 = u.col(k).iter().sum();
            s * s
        })
        .collect();
    Ok(ClassicalTrapSpectrum {
        eigenvalues,
        weights,
    })
}

/// `P(t) = (1/N) Σ_n e^{−λ_n t} |Σ_j ⟨j|Ψ_n⟩|²`.
pub fn survival_classical(laplacian: &Laplacian, config: &TrapConfig, grid: &TimeGrid) -> Result<TimeSeries> {
    let spectrum = classical_trap_spectrum(laplacian, config)?;
    survival_classical_from(&spectrum, grid)
}

pub fn survival_classical_from(spectrum: &ClassicalTrapSpectrum, grid: &TimeGrid) -> Result<TimeSeries> {
    let n = spectrum.eigenvalues.len() as f64;
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            spectrum
                .eigenvalues
                .iter()
                .zip(&spectrum.weights)
                // clamp roundoff below zero so Γ = 0 stays exactly stationary
                .map(|(l, w)| w * (-l.max(0.0) * t).exp())
                .sum::<f64>()
                / n
        })
        .map(|v: f64| v.min(1.0))
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::ClassicalSurvival)
}
