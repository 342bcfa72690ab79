//! Sierpinski gaskets, carpets and their duals as networks, together with
//! the spectral and dynamical machinery for continuous-time classical and
//! quantum walks on them: return probabilities, recurrence estimates and
//! survival under absorbing traps.

pub mod dynamics;
pub mod error;
pub mod graph;
pub mod recurrence;
pub mod spectral;
pub mod trapping;

pub use error::{Error, Result};
pub use graph::{Laplacian, Network, NetworkKind};
