//! Laplacian eigendecomposition, eigenvalue degeneracies and the discrete
//! density of states built from them.

mod closed_form;
mod decompose;
mod degeneracy;

pub use closed_form::{chi_lb_dsg_closed_form, chi_lb_dsg_exact, rho_dsg_closed_form, to_f64};
pub use decompose::{decompose, decompose_with_budget, SolverBudget, SpectralDecomposition};
pub use degeneracy::{
    chi_lb, counting_function, degeneracies, degeneracies_default, default_tolerance,
    DegeneracySpectrum, Level,
};
