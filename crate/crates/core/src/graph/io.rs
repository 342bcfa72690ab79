use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Network, NetworkKind, NodeRoles};
use crate::error::Result;

/// JSON interchange form of a [`Network`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub kind: NetworkKind,
    pub generation: u32,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub coords: Vec<[i64; 2]>,
    pub roles: NodeRoles,
}

impl From<&Network> for GraphFile {
    fn from(net: &Network) -> Self {
        GraphFile {
            kind: net.kind(),
            generation: net.generation(),
            n: net.node_count(),
            edges: net.edges().to_vec(),
            coords: net.coords().to_vec(),
            roles: net.node_roles().clone(),
        }
    }
}

impl GraphFile {
    pub fn into_network(self) -> Result<Network> {
        if self.n != self.coords.len() {
            return Err(crate::Error::InvalidGraph(format!(
                "declared n = {} but {} coordinates given",
                self.n,
                self.coords.len()
            )));
        }
        Network::from_parts(self.kind, self.generation, self.coords, self.edges, self.roles)
    }
}

impl Network {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphFile::from(self)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Network> {
        serde_json::from_str::<GraphFile>(text)?.into_network()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Network> {
        Network::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
