//! Classical and quantum walk observables evaluated from a spectral
//! decomposition.

mod fit;
mod grid;
mod series;
mod transition;

pub use fit::{classical_scaling_window, fit_classical_decay, fit_power_law, PowerLawFit};
pub(crate) use fit::linear_regression;
pub use grid::{GridScheme, TimeGrid};
pub use series::{Observable, TimeSeries, PROBABILITY_SLACK};
pub use transition::{
    alpha_bound, average_return_classical, average_return_classical_dos, average_return_quantum,
    ctqw_transition, ctrw_transition, dominant_eigenvalue_approx, exact_return_cosine,
    windowed_alpha_average,
};
