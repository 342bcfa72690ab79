//! Absorbing traps: effective Hamiltonians, their complex spectra, survival
//! probabilities and dark-state counts.

mod classical;
mod config;
mod dark;
mod hamiltonian;
mod perturbative;
mod report;
mod spectrum;

pub use classical::{
    classical_trap_spectrum, survival_classical, survival_classical_from, ClassicalTrapSpectrum,
};
pub use config::{TrapConfig, TrapScheme};
pub use dark::dark_state_count;
pub use hamiltonian::{effective_hamiltonian, EffectiveHamiltonian};
pub use perturbative::{gamma_perturbative, perturbative_dark_count};
pub use report::TrapReport;
pub use spectrum::{
    complex_spectrum, complex_spectrum_with_budget, complex_spectrum_with_modes, survival_asymptotic,
    survival_quantum, survival_quantum_rates,
    ComplexEigenvalue, ComplexSpectrum, Sensitivity, COMPLEX_BUDGET, DEFAULT_RELATIVE_THRESHOLD,
};
