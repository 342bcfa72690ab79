//! Dense matrix exponential used as an eigensolver-free reference.
#![allow(dead_code)]

use faer::c64;
use sierpinski_walks::Laplacian;

/// Row-major dense complex matrix.
#[derive(Clone)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<c64>,
}

impl Dense {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![c64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c64::new(1.0, 0.0);
        }
        Dense { n, a }
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        let n = self.n;
        let mut a = vec![c64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == c64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] += x * other.a[k * n + j];
                }
            }
        }
        Dense { n, a }
    }

    pub fn scale(&self, s: c64) -> Dense {
        Dense {
            n: self.n,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Dense) -> Dense {
        Dense {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.a[i * self.n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Scaling and squaring with a 30-term Taylor series.
    pub fn exp(&self) -> Dense {
        let squarings = (self.norm1() / 0.5).log2().ceil().max(0.0) as u32;
        let x = self.scale(c64::new(0.5f64.powi(squarings as i32), 0.0));
        let mut term = Dense::identity(self.n);
        let mut sum = Dense::identity(self.n);
        for k in 1..=30 {
            term = term.mul(&x).scale(c64::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum);
        }
        sum
    }
}

/// `L − iΓP` as a dense matrix, from the Laplacian entries.
pub fn effective(lap: &Laplacian, traps: &[usize], rate: f64) -> Dense {
    let n = lap.dim();
    let mut a: Vec<c64> = (0..n * n)
        .map(|idx| c64::new(lap.get(idx / n, idx % n), 0.0))
        .collect();
    for &m in traps {
        a[m * n + m] -= c64::new(0.0, rate);
    }
    Dense { n, a }
}

/// `(1/N) Σ_jk |⟨k|e^{-iHt}|j⟩|²`.
pub fn propagated_survival(h: &Dense, t: f64) -> f64 {
    let u = h.scale(c64::new(0.0, -t)).exp();
    u.a.iter().map(|z| z.norm_sqr()).sum::<f64>() / h.n as f64
}

/// `(1/N) Σ_jk ⟨k|e^{-(L + ΓP)t}|j⟩`, reading `L + ΓP` off `L − iΓP`.
pub fn propagated_classical(h: &Dense, t: f64) -> f64 {
    let generator = Dense {
        n: h.n,
        a: h.a.iter().map(|z| c64::new(z.im - z.re, 0.0)).collect(),
    };
    let u = generator.scale(c64::new(t, 0.0)).exp();
    u.a.iter().map(|z| z.re).sum::<f64>() / h.n as f64
}
