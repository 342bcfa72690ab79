use sha2::{Digest, Sha256};

use super::Network;

/// Sparse graph Laplacian: node degrees on the diagonal, -1 for each edge.
///
/// The quantum walk uses it as the Hamiltonian and the classical walk uses
/// its negative as the transfer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laplacian {
    degrees: Vec<usize>,
    row_start: Vec<usize>,
    columns: Vec<usize>,
}

impl Laplacian {
    pub fn from_network(network: &Network) -> Self {
        let n = network.node_count();
        let mut row_start = Vec::with_capacity(n + 1);
        let mut columns = Vec::with_capacity(2 * network.edge_count());
        let mut degrees = Vec::with_capacity(n);
        row_start.push(0);
        for node in 0..n {
            let neighbors = network.neighbors(node);
            degrees.push(neighbors.len());
            columns.extend_from_slice(neighbors);
            row_start.push(columns.len());
        }
        Laplacian {
            degrees,
            row_start,
            columns,
        }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.degrees[node]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Off-diagonal nonzero columns of `row`, ascending.
    pub fn neighbors(&self, row: usize) -> &[usize] {
        &self.columns[self.row_start[row]..self.row_start[row + 1]]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if row == col {
            self.degrees[row] as f64
        } else if self.neighbors(row).binary_search(&col).is_ok() {
            -1.0
        } else {
            0.0
        }
    }

    pub fn trace(&self) -> f64 {
        self.degrees.iter().sum::<usize>() as f64
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|r| self.degrees[r] as f64 - self.neighbors(r).len() as f64)
            .collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|r| {
                let off: f64 = self.neighbors(r).iter().map(|&c| x[c]).sum();
                self.degrees[r] as f64 * x[r] - off
            })
            .collect()
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut dense = vec![0.0; n * n];
        for r in 0..n {
            dense[r * n + r] = self.degrees[r] as f64;
            for &c in self.neighbors(r) {
                dense[r * n + c] = -1.0;
            }
        }
        dense
    }

    pub(crate) fn to_faer(&self) -> faer::Mat<f64> {
        let n = self.dim();
        let mut m = faer::Mat::<f64>::zeros(n, n);
        for r in 0..n {
            m[(r, r)] = self.degrees[r] as f64;
            for &c in self.neighbors(r) {
                m[(r, c)] = -1.0;
            }
        }
        m
    }

    /// SHA-256 over the dimension and upper-triangle sparsity pattern;
    /// identifies the matrix for caching.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.dim() as u64).to_le_bytes());
        for r in 0..self.dim() {
            for &c in self.neighbors(r).iter().filter(|&&c| c > r) {
                hasher.update((r as u64).to_le_bytes());
                hasher.update((c as u64).to_le_bytes());
            }
        }
        hex::encode(hasher.finalize())
    }
}

#[cfg(test)]
mod tests {
    use crate::graph::{generate, NetworkKind};

    #[test]
    fn triangle() {
        let lap = generate(NetworkKind::Sg, 1).unwrap().laplacian();
        assert_eq!(lap.to_dense(), vec![2., -1., -1., -1., 2., -1., -1., -1., 2.]);
    }

    #[test]
    fn rows_sum_to_zero_and_symmetric() {
        for kind in NetworkKind::FRACTALS {
            let lap = generate(kind, 3).unwrap().laplacian();
            assert!(lap.row_sums().iter().all(|&s| s == 0.0));
            let n = lap.dim();
            let dense = lap.to_dense();
            for r in 0..n {
                for c in 0..n {
                    assert_eq!(dense[r * n + c], dense[c * n + r]);
                    assert_eq!(dense[r * n + c], lap.get(r, c));
                }
            }
        }
    }

    #[test]
    fn hash_distinguishes_networks() {
        let a = generate(NetworkKind::Sg, 3).unwrap().laplacian();
        let b = generate(NetworkKind::Dsg, 3).unwrap().laplacian();
        assert_eq!(a.content_hash(), a.clone().content_hash());
        assert_ne!(a.content_hash(), b.content_hash());
        assert_eq!(a.content_hash().len(), 64);
    }
}
