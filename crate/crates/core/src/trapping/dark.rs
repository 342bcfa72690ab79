use crate::error::Result;
use crate::graph::Laplacian;

use super::TrapConfig;

/// Mersenne prime `2^31 − 1`.
const MODULUS: u64 = (1 << 31) - 1;

#[inline]
fn reduce(x: u64) -> u64 {
    // x < 2^63: two folds bring it below 2^31 + 1
    let y = (x & MODULUS) + (x >> 31);
    let y = (y & MODULUS) + (y >> 31);
    if y >= MODULUS {
        y - MODULUS
    } else {
        y
    }
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = reduce(acc * base);
        }
        base = reduce(base * base);
        exp >>= 1;
    }
    acc
}

/// Row-echelon basis over `Z/p`, each row normalized to a unit pivot that
/// is zero in every later row.
struct EchelonBasis {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    fn new() -> Self {
        EchelonBasis {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` in place; inserts it and returns true if independent.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c == 0 {
                continue;
            }
            let neg = MODULUS - c;
            for (x, r) in v.iter_mut().zip(row) {
                *x = reduce(*x + neg * r);
            }
        }
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = pow_mod(v[pivot], MODULUS - 2);
        for x in v.iter_mut() {
            *x = reduce(*x * inv);
        }
        self.rows.push(v);
        self.pivots.push(pivot);
        true
    }
}

/// `A v mod p` for the integer Laplacian.
fn apply(laplacian: &Laplacian, v: &[u64]) -> Vec<u64> {
    (0..laplacian.dim())
        .map(|i| {
            let diag = laplacian.degree(i) as u64 * v[i];
            let off: u64 = laplacian.neighbors(i).iter().map(|&j| v[j]).sum();
            reduce(diag + (MODULUS * 8 - reduce(off)))
        })
        .collect()
}

/// Rank of the Krylov space `span{A^k e_m : m trap, k ≥ 0}` over `Z/p`.
fn krylov_rank(laplacian: &Laplacian, traps: &[usize]) -> usize {
    let n = laplacian.dim();
    let mut basis = EchelonBasis::new();
    // chains advance in lockstep so a chain that stalls can be dropped:
    // its later powers stay inside the span of the surviving chains.
    let mut active: Vec<Vec<u64>> = traps
        .iter()
        .map(|&m| {
            let mut e = vec![0; n];
            e[m] = 1;
            e
        })
        .collect();
    while !active.is_empty() && basis.rank() < n {
        let mut next = Vec::with_capacity(active.len());
        for v in active {
            if basis.insert(v.clone()) {
                next.push(apply(laplacian, &v));
            }
        }
        active = next;
    }
    basis.rank()
}

/// Exact number of eigenstates of `H_eff` with vanishing decay rate.
///
/// These are the Laplacian eigenvectors that vanish on every trap, and they
/// span the orthogonal complement of the Krylov space generated from the
/// trap indicators. The rank is taken over `Z/(2^31 − 1)`, which equals the
/// rational rank unless the prime divides every maximal minor. Independent
/// of `Γ` as long as `Γ > 0`.
pub fn dark_state_count(laplacian: &Laplacian, config: &TrapConfig) -> Result<usize> {
    config.check_dim(laplacian.dim())?;
    if config.gamma == 0.0 {
        return Ok(laplacian.dim());
    }
    Ok(laplacian.dim() - krylov_rank(laplacian, config.trap_nodes()))
}
