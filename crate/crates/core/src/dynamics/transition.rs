use super::{Observable, TimeGrid, TimeSeries};
use crate::error::{Error, Result};
use crate::spectral::{DegeneracySpectrum, SpectralDecomposition};

fn check_node(spec: &SpectralDecomposition, node: usize) -> Result<()> {
    let n = spec.dim();
    if node >= n {
        return Err(Error::InvalidNode { index: node, n });
    }
    Ok(())
}

/// Spectral weights `Φ_{k,n} Φ_{j,n}` for every mode `n`.
fn pair_weights(spec: &SpectralDecomposition, k: usize, j: usize) -> Result<Vec<f64>> {
    check_node(spec, k)?;
    check_node(spec, j)?;
    (0..spec.dim())
        .map(|n| {
            let v = spec.vector(n)?;
            Ok(v[k] * v[j])
        })
        .collect()
}

/// Classical random walk `p_{k,j}(t) = Σ_n e^{-E_n t} Φ_{k,n} Φ_{j,n}`.
pub fn ctrw_transition(
    spec: &SpectralDecomposition,
    k: usize,
    j: usize,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let w = pair_weights(spec, k, j)?;
    let e = spec.eigenvalues();
    let values = grid
        .points()
        .iter()
        .map(|&t| w.iter().zip(e).map(|(w, e)| w * (-e * t).exp()).sum())
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::ClassicalTransition)
}

/// Quantum walk `π_{k,j}(t) = |Σ_n e^{-i E_n t} Φ_{k,n} Φ_{j,n}|²`.
pub fn ctqw_transition(
    spec: &SpectralDecomposition,
    k: usize,
    j: usize,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let w = pair_weights(spec, k, j)?;
    let e = spec.eigenvalues();
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            let (re, im) = w.iter().zip(e).fold((0.0, 0.0), |(re, im), (w, e)| {
                let (s, c) = (e * t).sin_cos();
                (re + w * c, im - w * s)
            });
            re * re + im * im
        })
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::QuantumTransition)
}

/// Return probability written as the double cosine sum
/// `Σ_{n,m} a_n a_m cos((E_m − E_n) t)` with `a_n = Φ_{node,n}²`.
/// Agrees with `ctqw_transition(spec, node, node, ..)`.
pub fn exact_return_cosine(
    spec: &SpectralDecomposition,
    node: usize,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let a = pair_weights(spec, node, node)?;
    let e = spec.eigenvalues();
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            let mut total = 0.0;
            for (n, (an, en)) in a.iter().zip(e).enumerate() {
                total += an * an;
                for (am, em) in a[n + 1..].iter().zip(&e[n + 1..]) {
                    total += 2.0 * an * am * ((em - en) * t).cos();
                }
            }
            total
        })
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::QuantumTransition)
}

/// `p̄(t) = (1/N) Σ_n e^{-E_n t}` from the full eigenvalue list.
pub fn average_return_classical(spec: &SpectralDecomposition, grid: &TimeGrid) -> Result<TimeSeries> {
    let e = spec.eigenvalues();
    let inv_n = 1.0 / e.len() as f64;
    let values = grid
        .points()
        .iter()
        .map(|&t| inv_n * e.iter().map(|e| (-e * t).exp()).sum::<f64>())
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::ClassicalAverage)
}

/// `p̄(t) = Σ_E ρ(E) e^{-E t}` from the density of states.
pub fn average_return_classical_dos(dos: &DegeneracySpectrum, grid: &TimeGrid) -> Result<TimeSeries> {
    let values = grid
        .points()
        .iter()
        .map(|&t| dos.levels().iter().map(|l| l.rho * (-l.energy * t).exp()).sum())
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::ClassicalAverage)
}

/// `|ᾱ(t)|² = |Σ_E ρ(E) e^{-iEt}|²`, a lower bound for `π̄(t)`.
pub fn alpha_bound(dos: &DegeneracySpectrum, grid: &TimeGrid) -> Result<TimeSeries> {
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            let (re, im) = dos.levels().iter().fold((0.0, 0.0), |(re, im), l| {
                let (s, c) = (l.energy * t).sin_cos();
                (re + l.rho * c, im - l.rho * s)
            });
            re * re + im * im
        })
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::AlphaBound)
}

/// `π̄(t) = (1/N) Σ_j π_{j,j}(t)`. Costs `O(N²)` per time point.
pub fn average_return_quantum(spec: &SpectralDecomposition, grid: &TimeGrid) -> Result<TimeSeries> {
    let n = spec.dim();
    let vectors = spec.vectors()?;
    let squares: Vec<f64> = vectors.iter().map(|x| x * x).collect();
    let e = spec.eigenvalues();
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            re.fill(0.0);
            im.fill(0.0);
            for (mode, column) in squares.chunks_exact(n).enumerate() {
                let (s, c) = (e[mode] * t).sin_cos();
                for ((r, i), w) in re.iter_mut().zip(im.iter_mut()).zip(column) {
                    *r += w * c;
                    *i -= w * s;
                }
            }
            re.iter().zip(&im).map(|(r, i)| r * r + i * i).sum::<f64>() / n as f64
        })
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::QuantumAverage)
}

/// Single-level approximation of `|ᾱ(t)|²` around the level at `energy`:
/// `ρ_m² + ρ_m Σ_{E ≠ E_m} ρ(E) cos((E − E_m) t)`.
pub fn dominant_eigenvalue_approx(
    dos: &DegeneracySpectrum,
    energy: f64,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let level = *dos.level_at(energy).ok_or(Error::UnknownEigenvalue(energy))?;
    let others: Vec<_> = dos
        .levels()
        .iter()
        .filter(|l| l.energy != level.energy)
        .collect();
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            let cross: f64 = others
                .iter()
                .map(|l| l.rho * ((l.energy - level.energy) * t).cos())
                .sum();
            level.rho * level.rho + level.rho * cross
        })
        .collect();
    TimeSeries::new(grid.clone(), values, Observable::DominantApprox)
}

/// Exact `(1/T) ∫_0^T |ᾱ(t)|² dt = Σ_{m,m'} ρ_m ρ_m' sinc((E_m − E_m') T)`.
/// Tends to `χ_lb` as `T → ∞`.
pub fn windowed_alpha_average(dos: &DegeneracySpectrum, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter(format!("horizon {horizon} must be positive")));
    }
    let levels = dos.levels();
    let mut total = 0.0;
    for (i, a) in levels.iter().enumerate() {
        total += a.rho * a.rho;
        for b in &levels[i + 1..] {
            let x = (b.energy - a.energy) * horizon;
            total += 2.0 * a.rho * b.rho * x.sin() / x;
        }
    }
    Ok(total)
}
