use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Network;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrapScheme {
    OuterCorners,
    InnerHoleCorners,
    Explicit(Vec<usize>),
}

impl TrapScheme {
    pub fn label(&self) -> &'static str {
        match self {
            TrapScheme::OuterCorners => "outer_corners",
            TrapScheme::InnerHoleCorners => "inner_hole_corners",
            TrapScheme::Explicit(_) => "explicit",
        }
    }
}

/// Absorbing nodes with a uniform trapping rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    pub scheme: TrapScheme,
    pub gamma: f64,
    trap_nodes: Vec<usize>,
}

impl TrapConfig {
    /// Resolves `scheme` against the node roles of `network`.
    pub fn resolve(network: &Network, scheme: TrapScheme, gamma: f64) -> Result<Self> {
        let nodes = match &scheme {
            TrapScheme::OuterCorners => network.outer_corners().to_vec(),
            TrapScheme::InnerHoleCorners => network.inner_hole_corners()?.to_vec(),
            TrapScheme::Explicit(nodes) => nodes.clone(),
        };
        Self::with_nodes(scheme, nodes, gamma, network.node_count())
    }

    /// Explicit trap list on a graph with `n` nodes.
    pub fn explicit(nodes: Vec<usize>, gamma: f64, n: usize) -> Result<Self> {
        Self::with_nodes(TrapScheme::Explicit(nodes.clone()), nodes, gamma, n)
    }

    fn with_nodes(scheme: TrapScheme, mut nodes: Vec<usize>, gamma: f64, n: usize) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "trapping rate {gamma} must be finite and non-negative"
            )));
        }
        if let Some(&index) = nodes.iter().find(|&&m| m >= n) {
            return Err(Error::InvalidTrapNode { index, n });
        }
        nodes.sort_unstable();
        if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!("trap node {} repeated", w[0])));
        }
        Ok(TrapConfig {
            scheme,
            gamma,
            trap_nodes: nodes,
        })
    }

    /// Sorted trap indices.
    pub fn trap_nodes(&self) -> &[usize] {
        &self.trap_nodes
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        match self.trap_nodes.iter().find(|&&m| m >= n) {
            Some(&index) => Err(Error::InvalidTrapNode { index, n }),
            None => Ok(()),
        }
    }
}
