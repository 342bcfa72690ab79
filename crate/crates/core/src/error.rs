use thiserror::Error;

use crate::graph::NetworkKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{kind} generation {generation} would have {nodes} nodes, above the cap of {cap}")]
    GenerationTooLarge {
        kind: NetworkKind,
        generation: u32,
        nodes: u128,
        cap: usize,
    },
    #[error("generation must be at least 1, got {0}")]
    InvalidGeneration(u32),
    #[error("no inner hole exists at generation {0}")]
    NoInnerHole(u32),
    #[error("{0} networks cannot be dualized")]
    NotDualizable(NetworkKind),
    #[error("dimension {n} exceeds the {what} budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("eigensolver failed to converge")]
    ConvergenceFailure,
    #[error("decomposition holds eigenvalues only, eigenvectors are required")]
    MissingEigenvectors,
    #[error("node {index} out of range for a network of {n} nodes")]
    InvalidNode { index: usize, n: usize },
    #[error("invalid trap node {index} for a network of {n} nodes")]
    InvalidTrapNode { index: usize, n: usize },
    #[error("no eigenvalue cluster at E = {0}")]
    UnknownEigenvalue(f64),
    #[error("series is empty")]
    EmptySeries,
    #[error("time grid spans {decades:.2} decades, at least {required} required")]
    InsufficientDecades { decades: f64, required: f64 },
    #[error("found {found} local maxima, at least {required} required")]
    TooFewMaxima { found: usize, required: usize },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Failures of the numerical machinery, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure | Error::BudgetExceeded { .. }
        )
    }

    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            Error::GenerationTooLarge { .. } => "generation-too-large",
            Error::InvalidGeneration(_) => "invalid-generation",
            Error::NoInnerHole(_) => "no-inner-hole",
            Error::NotDualizable(_) => "not-dualizable",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::ConvergenceFailure => "convergence-failure",
            Error::MissingEigenvectors => "missing-eigenvectors",
            Error::InvalidNode { .. } => "invalid-node",
            Error::InvalidTrapNode { .. } => "invalid-trap-node",
            Error::UnknownEigenvalue(_) => "unknown-eigenvalue",
            Error::EmptySeries => "empty-series",
            Error::InsufficientDecades { .. } => "insufficient-decades",
            Error::TooFewMaxima { .. } => "too-few-maxima",
            Error::InvalidGrid(_) => "invalid-grid",
            Error::InvalidGraph(_) => "invalid-graph",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
