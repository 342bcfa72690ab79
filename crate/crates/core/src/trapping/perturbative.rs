use faer::{Mat, Side};

use super::TrapConfig;
use crate::error::{Error, Result};
use crate::spectral::{default_tolerance, SpectralDecomposition};

/// First-order rates `γ_n ≈ Γ Σ_m |⟨m|Φ_n⟩|²`, one per eigenvector of the
/// untrapped Laplacian. Within a degenerate level these depend on the
/// chosen basis, so they are a diagnostic only.
pub fn gamma_perturbative(spec: &SpectralDecomposition, config: &TrapConfig) -> Result<Vec<f64>> {
    config.check_dim(spec.dim())?;
    (0..spec.dim())
        .map(|n| {
            let v = spec.vector(n)?;
            Ok(config.gamma * config.trap_nodes().iter().map(|&m| v[m] * v[m]).sum::<f64>())
        })
        .collect()
}

/// Basis-independent first-order dark count: for each degenerate level with
/// eigenvectors `V`, the dimension of the kernel of the trap rows of `V`.
/// Singular values below `amplitude_tol` count as zero.
pub fn perturbative_dark_count(
    spec: &SpectralDecomposition,
    config: &TrapConfig,
    amplitude_tol: f64,
) -> Result<usize> {
    config.check_dim(spec.dim())?;
    if !spec.has_vectors() {
        return Err(Error::MissingEigenvectors);
    }
    let traps = config.trap_nodes();
    let values = spec.eigenvalues();
    let tol = default_tolerance(spec.max_eigenvalue());
    let mut dark = 0;
    let mut start = 0;
    for end in 1..=values.len() {
        if end < values.len() && values[end] - values[end - 1] < tol {
            continue;
        }
        // Gram matrix of the trap rows restricted to modes start..end
        let gram = Mat::from_fn(traps.len(), traps.len(), |a, b| {
            (start..end)
                .map(|n| {
                    let v = spec.vector(n).expect("vectors present");
                    v[traps[a]] * v[traps[b]]
                })
                .sum::<f64>()
        });
        let rank = if traps.is_empty() {
            0
        } else {
            gram.self_adjoint_eigenvalues(Side::Lower)
                .map_err(|_| Error::ConvergenceFailure)?
                .iter()
                .filter(|&&s| s > amplitude_tol * amplitude_tol)
                .count()
        };
        dark += (end - start).saturating_sub(rank);
        start = end;
    }
    Ok(dark)
}
