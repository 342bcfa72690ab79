//! Deterministic Sierpinski networks: gasket (SG), carpet (SC) and their
//! duals (DSG, DSC).
//!
//! All node positions are integer lattice coordinates, so merging shared
//! corners during construction is exact. Gasket positions live on a
//! triangular lattice and are stored as `[2a + b, b]` for the skew lattice
//! point `a·e1 + b·e2`; carpet positions are plain square-lattice points.
//! Nodes are ordered lexicographically by `(y, x)`, which puts a corner of
//! every structure at index 0.

mod build;
mod io;
mod laplacian;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use build::{dualize, generate, generate_with_cap, node_count, DEFAULT_NODE_CAP};
pub use io::GraphFile;
pub use laplacian::Laplacian;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NetworkKind {
    #[serde(rename = "SG")]
    Sg,
    #[serde(rename = "DSG")]
    Dsg,
    #[serde(rename = "SC")]
    Sc,
    #[serde(rename = "DSC")]
    Dsc,
    /// Any graph loaded from a file that is not one of the four fractals.
    #[serde(rename = "custom")]
    Custom,
}

impl NetworkKind {
    pub const FRACTALS: [NetworkKind; 4] = [Self::Sg, Self::Dsg, Self::Sc, Self::Dsc];

    pub fn is_gasket(self) -> bool {
        matches!(self, Self::Sg | Self::Dsg)
    }

    pub fn is_carpet(self) -> bool {
        matches!(self, Self::Sc | Self::Dsc)
    }

    pub fn is_dual(self) -> bool {
        matches!(self, Self::Dsg | Self::Dsc)
    }

    /// Number of corners of the outer boundary and of the central hole.
    pub fn corner_count(self) -> usize {
        if self.is_carpet() {
            4
        } else {
            3
        }
    }

    pub fn fractal_dimension(self) -> Option<f64> {
        match self {
            Self::Sg | Self::Dsg => Some(3f64.ln() / 2f64.ln()),
            Self::Sc | Self::Dsc => Some(8f64.ln() / 3f64.ln()),
            Self::Custom => None,
        }
    }

    /// Spectral dimension; a structure and its dual share the same value.
    pub fn spectral_dimension(self) -> Option<f64> {
        match self {
            Self::Sg | Self::Dsg => Some(2.0 * 3f64.ln() / 5f64.ln()),
            Self::Sc | Self::Dsc => Some(1.805),
            Self::Custom => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sg => "SG",
            Self::Dsg => "DSG",
            Self::Sc => "SC",
            Self::Dsc => "DSC",
            Self::Custom => "custom",
        }
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sg" => Ok(Self::Sg),
            "dsg" => Ok(Self::Dsg),
            "sc" => Ok(Self::Sc),
            "dsc" => Ok(Self::Dsc),
            "custom" => Ok(Self::Custom),
            other => Err(Error::InvalidParameter(format!("unknown network kind `{other}`"))),
        }
    }
}

/// Distinguished nodes used for trap placement.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRoles {
    /// Extreme corners of the structure (cells containing them, for duals).
    pub outer: Vec<usize>,
    /// Corners of the largest empty central triangle or square. For duals,
    /// the cells touching the hole at those corners. Empty at generation 1.
    pub inner: Vec<usize>,
}

/// Immutable undirected graph with lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    kind: NetworkKind,
    generation: u32,
    coords: Vec<[i64; 2]>,
    edges: Vec<[usize; 2]>,
    neighbors: Vec<Vec<usize>>,
    roles: NodeRoles,
    sorted_coords: bool,
}

impl Network {
    /// Validates and assembles a network. Edges are normalized to `i < j`
    /// and sorted; duplicates, self-loops, repeated coordinates and
    /// disconnected graphs are rejected.
    pub fn from_parts(
        kind: NetworkKind,
        generation: u32,
        coords: Vec<[i64; 2]>,
        edges: impl IntoIterator<Item = [usize; 2]>,
        roles: NodeRoles,
    ) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::InvalidGraph("network has no nodes".into()));
        }
        let unique: BTreeSet<[i64; 2]> = coords.iter().copied().collect();
        if unique.len() != n {
            return Err(Error::InvalidGraph("node coordinates are not unique".into()));
        }

        let mut normalized = Vec::new();
        for [a, b] in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) references a node outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
            }
            normalized.push([a.min(b), a.max(b)]);
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }

        let mut neighbors = vec![Vec::new(); n];
        for &[a, b] in &normalized {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }

        for &node in roles.outer.iter().chain(&roles.inner) {
            if node >= n {
                return Err(Error::InvalidNode { index: node, n });
            }
        }

        let sorted_coords = coords
            .windows(2)
            .all(|w| (w[0][1], w[0][0]) < (w[1][1], w[1][0]));
        let network = Network {
            kind,
            generation,
            sorted_coords,
            coords,
            edges: normalized,
            neighbors,
            roles,
        };
        if !network.is_connected() {
            return Err(Error::InvalidGraph("network is not connected".into()));
        }
        Ok(network)
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edge list with `i < j`.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn coords(&self) -> &[[i64; 2]] {
        &self.coords
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn node_roles(&self) -> &NodeRoles {
        &self.roles
    }

    pub fn outer_corners(&self) -> &[usize] {
        &self.roles.outer
    }

    pub fn inner_hole_corners(&self) -> Result<&[usize]> {
        if self.roles.inner.is_empty() {
            Err(Error::NoInnerHole(self.generation))
        } else {
            Ok(&self.roles.inner)
        }
    }

    pub fn node_at(&self, coord: [i64; 2]) -> Option<usize> {
        let key = |c: &[i64; 2]| (c[1], c[0]);
        if !self.sorted_coords {
            return self.coords.iter().position(|c| *c == coord);
        }
        self.coords
            .binary_search_by(|c| key(c).cmp(&key(&coord)))
            .ok()
    }

    pub fn laplacian(&self) -> Laplacian {
        Laplacian::from_network(self)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(node) = queue.pop_front() {
            for &next in &self.neighbors[node] {
                if !seen[next] {
                    seen[next] = true;
                    reached += 1;
                    queue.push_back(next);
                }
            }
        }
        reached == n
    }
}
