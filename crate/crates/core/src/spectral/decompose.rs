use faer::Side;

use crate::error::{Error, Result};
use crate::graph::Laplacian;

/// Size limits for the dense symmetric eigensolver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverBudget {
    pub max_with_vectors: usize,
    pub max_values_only: usize,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            max_with_vectors: 8192,
            max_values_only: 16384,
        }
    }
}

/// Eigenvalues of a Laplacian in ascending order, optionally with an
/// orthonormal set of eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Column-major; column `n` is the eigenvector of `eigenvalues[n]`.
    eigenvectors: Option<Vec<f64>>,
}

impl SpectralDecomposition {
    /// Wraps precomputed data (e.g. from a cache). Eigenvalues must be
    /// sorted ascending and vectors, if present, column-major `N × N`.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Option<Vec<f64>>) -> Result<Self> {
        let n = eigenvalues.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty spectrum".into()));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) || eigenvalues.iter().any(|e| !e.is_finite())
        {
            return Err(Error::InvalidParameter(
                "eigenvalues must be finite and sorted".into(),
            ));
        }
        if let Some(v) = &eigenvectors {
            if v.len() != n * n {
                return Err(Error::InvalidParameter(format!(
                    "expected {} eigenvector entries, got {}",
                    n * n,
                    v.len()
                )));
            }
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn has_vectors(&self) -> bool {
        self.eigenvectors.is_some()
    }

    /// Eigenvector `n` as a slice over nodes.
    pub fn vector(&self, n: usize) -> Result<&[f64]> {
        let dim = self.dim();
        let data = self.eigenvectors.as_ref().ok_or(Error::MissingEigenvectors)?;
        Ok(&data[n * dim..(n + 1) * dim])
    }

    /// Column-major eigenvector matrix.
    pub fn vectors(&self) -> Result<&[f64]> {
        self.eigenvectors.as_deref().ok_or(Error::MissingEigenvectors)
    }

    /// `⟨node|Φ_n⟩`.
    pub fn component(&self, node: usize, n: usize) -> Result<f64> {
        Ok(self.vector(n)?[node])
    }

    pub fn without_vectors(&self) -> SpectralDecomposition {
        SpectralDecomposition {
            eigenvalues: self.eigenvalues.clone(),
            eigenvectors: None,
        }
    }
}

pub fn decompose(laplacian: &Laplacian, want_vectors: bool) -> Result<SpectralDecomposition> {
    decompose_with_budget(laplacian, want_vectors, SolverBudget::default())
}

pub fn decompose_with_budget(
    laplacian: &Laplacian,
    want_vectors: bool,
    budget: SolverBudget,
) -> Result<SpectralDecomposition> {
    let n = laplacian.dim();
    let (what, limit) = if want_vectors {
        ("eigenvector", budget.max_with_vectors)
    } else {
        ("eigenvalue", budget.max_values_only)
    };
    if n > limit {
        return Err(Error::BudgetExceeded { what, n, limit });
    }
    let matrix = laplacian.to_faer();
    if !want_vectors {
        let eigenvalues = matrix
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::ConvergenceFailure)?;
        return Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors: None,
        });
    }

    let evd = matrix
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::ConvergenceFailure)?;
    let eigenvalues: Vec<f64> = evd.S().column_vector().iter().copied().collect();
    let u = evd.U();
    let mut vectors = Vec::with_capacity(n * n);
    for col in 0..n {
        let start = vectors.len();
        vectors.extend((0..n).map(|row| u[(row, col)]));
        orient(&mut vectors[start..]);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: Some(vectors),
    })
}

/// Flips `v` so its first non-negligible component is positive.
fn orient(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * scale) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, NetworkKind};

    #[test]
    fn triangle_spectrum() {
        let lap = generate(NetworkKind::Sg, 1).unwrap().laplacian();
        let spec = decompose(&lap, true).unwrap();
        let expected = [0.0, 3.0, 3.0];
        for (e, x) in spec.eigenvalues().iter().zip(expected) {
            assert!((e - x).abs() < 1e-12);
        }
        for n in 0..3 {
            let v = spec.vector(n).unwrap();
            let first = v.iter().find(|x| x.abs() > 1e-8).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn orthonormal_and_reconstructs() {
        let lap = generate(NetworkKind::Dsg, 3).unwrap().laplacian();
        let spec = decompose(&lap, true).unwrap();
        let n = spec.dim();
        let emax = spec.max_eigenvalue();
        let dense = lap.to_dense();
        for a in 0..n {
            let va = spec.vector(a).unwrap();
            for b in 0..n {
                let vb = spec.vector(b).unwrap();
                let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((dot - target).abs() <= 1e-9);
                let rec: f64 = (0..n)
                    .map(|k| spec.eigenvalues()[k] * spec.vector(k).unwrap()[a] * spec.vector(k).unwrap()[b])
                    .sum();
                assert!((rec - dense[a * n + b]).abs() <= 1e-8 * emax);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let lap = generate(NetworkKind::Dsg, 3).unwrap().laplacian();
        let tight = SolverBudget {
            max_with_vectors: 10,
            max_values_only: 30,
        };
        assert!(matches!(
            decompose_with_budget(&lap, true, tight),
            Err(Error::BudgetExceeded { n: 27, limit: 10, .. })
        ));
        assert!(decompose_with_budget(&lap, false, tight).is_ok());
    }

    #[test]
    fn values_only_has_no_vectors() {
        let lap = generate(NetworkKind::Sg, 2).unwrap().laplacian();
        let spec = decompose(&lap, false).unwrap();
        assert!(matches!(spec.vector(0), Err(Error::MissingEigenvectors)));
    }
}
