use std::fmt::Write as _;
use std::sync::Arc;

use faer::linalg::solvers::DenseSolveCore;
use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use super::EffectiveHamiltonian;
use crate::dynamics::{Observable, TimeGrid, TimeSeries};
use crate::error::{Error, Result};

/// Largest dimension handed to the dense complex eigensolver.
pub const COMPLEX_BUDGET: usize = 6000;

/// Default cutoff on `γ_n / Γ` below which a decay rate counts as zero.
pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 1e-20;

/// `E_n = ε_n − iγ_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexEigenvalue {
    pub eps: f64,
    /// Decay rate from the eigenvector weight on the traps.
    pub gamma: f64,
    /// `−Im E_n` as returned by the eigensolver.
    pub gamma_raw: f64,
}

/// Zero-rate counts one decade either side of the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sensitivity {
    pub lo: usize,
    pub hi: usize,
}

/// Largest allowed `|Π(0) − 1|` from the mode-overlap kernel.
const KERNEL_TOLERANCE: f64 = 1e-8;

/// Mode-overlap kernel `M_nm = (V†V)_mn (V⁻¹V⁻†)_nm` in sorted eigenvalue
/// order, so that `Σ_jk |⟨k|e^{-iHt}|j⟩|² = Σ_nm a_n M_nm ā_m` with
/// `a_n = e^{-iE_n t}`. The identity kernel corresponds to orthogonal modes.
#[derive(Clone, Debug)]
struct ModeKernel(Arc<Mat<c64>>);

impl PartialEq for ModeKernel {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&*self.0, &*other.0);
        a.nrows() == b.nrows()
            && (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)] == b[(i, j)]))
    }
}

/// Spectrum of an effective Hamiltonian with its zero-rate classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectrum {
    eigenvalues: Vec<ComplexEigenvalue>,
    rate: f64,
    trap_count: usize,
    zero_threshold: f64,
    n0: usize,
    sensitivity: Sensitivity,
    #[serde(skip)]
    kernel: Option<ModeKernel>,
}

pub fn complex_spectrum(h: &EffectiveHamiltonian, relative_threshold: f64) -> Result<ComplexSpectrum> {
    complex_spectrum_with_budget(h, relative_threshold, COMPLEX_BUDGET)
}

pub fn complex_spectrum_with_budget(
    h: &EffectiveHamiltonian,
    relative_threshold: f64,
    budget: usize,
) -> Result<ComplexSpectrum> {
    solve(h, relative_threshold, budget, false)
}

/// Like [`complex_spectrum`], but also keeps the mode-overlap kernel that
/// [`survival_quantum`] needs. Costs about `N²` extra complex entries.
pub fn complex_spectrum_with_modes(
    h: &EffectiveHamiltonian,
    relative_threshold: f64,
) -> Result<ComplexSpectrum> {
    solve(h, relative_threshold, COMPLEX_BUDGET, true)
}

/// Diagonalizes `H_eff`. Each decay rate is recomputed from its
/// eigenvector as `γ_n = Γ Σ_m |x_m|² / ‖x‖²`, which holds exactly for any
/// eigenpair and keeps tiny rates accurate relative to their size rather
/// than to `‖H‖`.
fn solve(
    h: &EffectiveHamiltonian,
    relative_threshold: f64,
    budget: usize,
    keep_kernel: bool,
) -> Result<ComplexSpectrum> {
    let n = h.dim();
    if n > budget {
        return Err(Error::BudgetExceeded {
            what: "complex eigensolver",
            n,
            limit: budget,
        });
    }
    if !(relative_threshold > 0.0 && relative_threshold.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "threshold {relative_threshold} must be positive"
        )));
    }
    let rate = h.gamma();
    let (eigenvalues, kernel) = if rate == 0.0 {
        let spec = crate::spectral::decompose(h.laplacian(), false)?;
        let values = spec
            .eigenvalues()
            .iter()
            .map(|&eps| ComplexEigenvalue {
                eps,
                gamma: 0.0,
                gamma_raw: 0.0,
            })
            .collect();
        let kernel = keep_kernel.then(|| ModeKernel(Arc::new(Mat::identity(n, n))));
        (values, kernel)
    } else {
        let evd = h.to_faer().eigen().map_err(|_| Error::ConvergenceFailure)?;
        let values = evd.S().column_vector();
        let vectors = evd.U();
        let unsorted: Vec<ComplexEigenvalue> = (0..n)
            .map(|k| {
                let col = vectors.col(k);
                let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum();
                let on_traps: f64 = h.traps().iter().map(|&m| col[m].norm_sqr()).sum();
                ComplexEigenvalue {
                    eps: values[k].re,
                    gamma: rate * on_traps / norm,
                    gamma_raw: -values[k].im,
                }
            })
            .collect();
        if unsorted.iter().any(|e| !(e.eps.is_finite() && e.gamma.is_finite())) {
            return Err(Error::ConvergenceFailure);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let (a, b) = (&unsorted[a], &unsorted[b]);
            a.eps.total_cmp(&b.eps).then(a.gamma.total_cmp(&b.gamma))
        });
        let kernel = if keep_kernel {
            Some(mode_kernel(vectors, &order)?)
        } else {
            None
        };
        (order.iter().map(|&k| unsorted[k]).collect(), kernel)
    };
    let mut spectrum = ComplexSpectrum {
        eigenvalues,
        rate,
        trap_count: h.traps().len(),
        zero_threshold: 0.0,
        n0: 0,
        sensitivity: Sensitivity { lo: 0, hi: 0 },
        kernel,
    };
    spectrum.reclassify(relative_threshold);
    Ok(spectrum)
}

fn mode_kernel(vectors: faer::MatRef<'_, c64>, order: &[usize]) -> Result<ModeKernel> {
    let n = order.len();
    let sorted = Mat::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    let inverse = sorted.partial_piv_lu().inverse();
    let gram = sorted.adjoint() * &sorted;
    let dual_gram = &inverse * inverse.adjoint();
    let kernel = Mat::from_fn(n, n, |a, b| gram[(b, a)] * dual_gram[(a, b)]);
    // at t = 0 the propagator is the identity, so the kernel sums to N
    let total: f64 = (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).map(|(i, j)| kernel[(i, j)].re).sum();
    if !((total / n as f64 - 1.0).abs() <= KERNEL_TOLERANCE) {
        return Err(Error::ConvergenceFailure);
    }
    Ok(ModeKernel(Arc::new(kernel)))
}

impl ComplexSpectrum {
    /// Recounts zero rates with cutoff `relative_threshold · Γ`.
    pub fn reclassify(&mut self, relative_threshold: f64) {
        let tau = relative_threshold * self.rate;
        self.zero_threshold = tau;
        self.n0 = self.count_below(tau);
        self.sensitivity = Sensitivity {
            lo: self.count_below(tau / 10.0),
            hi: self.count_below(tau * 10.0),
        };
    }

    /// Number of rates `γ_n ≤ tau` (all of them when `Γ = 0`).
    pub fn count_below(&self, tau: f64) -> usize {
        self.eigenvalues.iter().filter(|e| e.gamma <= tau).count()
    }

    pub fn eigenvalues(&self) -> &[ComplexEigenvalue] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn trap_count(&self) -> usize {
        self.trap_count
    }

    /// Absolute cutoff on `γ_n`.
    pub fn zero_threshold(&self) -> f64 {
        self.zero_threshold
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn sensitivity(&self) -> Sensitivity {
        self.sensitivity
    }

    /// Whether the count is unchanged one decade either side of the cutoff.
    pub fn is_stable(&self) -> bool {
        self.sensitivity.lo == self.n0 && self.sensitivity.hi == self.n0
    }

    /// `Σ γ_n`, equal to `Γ · |traps|`.
    pub fn gamma_sum(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.gamma).sum()
    }

    /// Relative deviation of `Σ γ_n` from `Γ · |traps|`.
    pub fn trace_defect(&self) -> f64 {
        let expected = self.rate * self.trap_count as f64;
        if expected == 0.0 {
            return self.gamma_sum().abs();
        }
        (self.gamma_sum() - expected).abs() / expected
    }

    /// Smallest rate above the cutoff.
    pub fn min_positive_gamma(&self) -> Option<f64> {
        self.eigenvalues
            .iter()
            .map(|e| e.gamma)
            .filter(|&g| g > self.zero_threshold)
            .min_by(f64::total_cmp)
    }

    /// `n,eps,gamma` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,eps,gamma\n");
        for (i, e) in self.eigenvalues.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{}", e.eps, e.gamma);
        }
        out
    }
}

/// Mean survival `Π(t) = (1/N) Σ_{j,k} |⟨k|e^{-iH_eff t}|j⟩|²`, evaluated
/// through the mode-overlap kernel so non-orthogonal modes are accounted
/// for. Classified zero rates are held at 0. Needs a spectrum from
/// [`complex_spectrum_with_modes`].
pub fn survival_quantum(spectrum: &ComplexSpectrum, grid: &TimeGrid) -> Result<TimeSeries> {
    const CHUNK: usize = 64;
    let kernel = &*spectrum.kernel.as_ref().ok_or(Error::MissingEigenvectors)?.0;
    let n = spectrum.dim();
    let rates: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .map(|e| if e.gamma > spectrum.zero_threshold { e.gamma } else { 0.0 })
        .collect();
    let phase = |m: usize, t: f64| {
        let (s, c) = (spectrum.eigenvalues[m].eps * t).sin_cos();
        c64::new(c, -s) * (-rates[m] * t).exp()
    };
    let mut values = Vec::with_capacity(grid.len());
    for times in grid.points().chunks(CHUNK) {
        let conj = Mat::from_fn(n, times.len(), |m, c| phase(m, times[c]).conj());
        let weighted = kernel * &conj;
        for (c, &t) in times.iter().enumerate() {
            let total: f64 = (0..n).map(|m| (phase(m, t) * weighted[(m, c)]).re).sum();
            values.push((total / n as f64).clamp(0.0, 1.0));
        }
    }
    TimeSeries::new(grid.clone(), values, Observable::QuantumSurvival)
}

/// `(1/N) Σ_n e^{-2γ_n t}`, the diagonal part of [`survival_quantum`]. Exact
/// only when the modes are orthogonal; otherwise an approximation with the
/// same `t = 0` and `t → ∞` limits.
pub fn survival_quantum_rates(spectrum: &ComplexSpectrum, grid: &TimeGrid) -> Result<TimeSeries> {
    let n = spectrum.dim() as f64;
    let rates: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .map(|e| e.gamma)
        .filter(|&g| g > spectrum.zero_threshold)
        .collect();
    let dark = spectrum.n0 as f64;
    let values = grid
        .points()
        .iter()
        .map(|&t| (dark + rates.iter().map(|g| (-2.0 * g * t).exp()).sum::<f64>()) / n)
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::QuantumSurvival)
}

/// `Π∞ = N0 / N`.
pub fn survival_asymptotic(spectrum: &ComplexSpectrum) -> f64 {
    spectrum.n0 as f64 / spectrum.dim() as f64
}
