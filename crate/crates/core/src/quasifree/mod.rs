//! Quadratic Hamiltonians and their quasi-free ground states.

mod catalog;
mod covariance;
mod hamiltonian;

pub use catalog::{build_model, params, pauli_terms, MODEL_NAMES};
pub use covariance::{
    bogoliubov_transform, covariance_to_projection, excitation_energies, graded_product, ground_covariance,
    ground_energy, BasisProjection, GroundRoute, GroundSolver, MajoranaCovariance, SelfDualCut, CONTRACTION_TOL,
    PURITY_TOL, ZERO_MODE_REL_TOL,
};
pub(crate) use covariance::{bloch_block, circulant_symbol};
pub use hamiltonian::{Boundary, QuadraticHamiltonian, HERMITICITY_TOL};
