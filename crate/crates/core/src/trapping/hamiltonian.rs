use faer::{c64, Mat};

use super::TrapConfig;
use crate::error::Result;
use crate::graph::Laplacian;

/// `H_eff = H − iΓ Σ_m |m⟩⟨m|` with `H` the graph Laplacian.
#[derive(Clone, Debug)]
pub struct EffectiveHamiltonian {
    laplacian: Laplacian,
    traps: Vec<usize>,
    gamma: f64,
}

pub fn effective_hamiltonian(laplacian: &Laplacian, config: &TrapConfig) -> Result<EffectiveHamiltonian> {
    config.check_dim(laplacian.dim())?;
    Ok(EffectiveHamiltonian {
        laplacian: laplacian.clone(),
        traps: config.trap_nodes().to_vec(),
        gamma: config.gamma,
    })
}

impl EffectiveHamiltonian {
    pub fn dim(&self) -> usize {
        self.laplacian.dim()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn traps(&self) -> &[usize] {
        &self.traps
    }

    pub fn laplacian(&self) -> &Laplacian {
        &self.laplacian
    }

    /// Entry `(i, j)` as `(re, im)`.
    pub fn get(&self, i: usize, j: usize) -> (f64, f64) {
        let im = if i == j && self.traps.binary_search(&i).is_ok() {
            -self.gamma
        } else {
            0.0
        };
        (self.laplacian.get(i, j), im)
    }

    /// `(Σ degrees, −Γ·|traps|)`.
    pub fn trace(&self) -> (f64, f64) {
        (self.laplacian.trace(), -self.gamma * self.traps.len() as f64)
    }

    pub(crate) fn to_faer(&self) -> Mat<c64> {
        let real = self.laplacian.to_faer();
        let mut m = Mat::from_fn(self.dim(), self.dim(), |i, j| c64::new(real[(i, j)], 0.0));
        for &t in &self.traps {
            m[(t, t)].im = -self.gamma;
        }
        m
    }
}
