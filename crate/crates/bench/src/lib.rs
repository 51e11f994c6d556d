//! Success-rate experiments for the otk solvers on Gaussian ensembles:
//! instance generation, seeded trials over a `(κ, ρ)` grid, 50% transition
//! estimates and CSV output. [`designed`] adds small matrices with
//! certifiable RICs for envelope checks.

pub mod csv;
pub mod designed;
pub mod ensemble;
pub mod grid;
pub mod transition;
pub mod trial;

pub use designed::{check_envelope, flat_null_matrix, perturbed_orthogonal, EnvelopeCheck};
pub use ensemble::{generate_instance, EnsembleSpec, GENERATOR_NAME};
pub use grid::{grid_values, success_grid, trial_seed, CellRate, GridResult, GridSpec, TransitionRow};
pub use transition::{transition_point, Transition};
pub use trial::{run_trial, TrialRecord, SUCCESS_TOL};
