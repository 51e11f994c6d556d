//! Inner solvers used by every outer iteration: exact binary optimal
//! k-thresholding, its relaxation over the capped simplex, and least squares
//! restricted to a support.

mod binary;
mod lsq;
mod projection;
mod relaxed;

pub use binary::{solve_binary_ot, BinarySolution, BINARY_OT_MAX_N};
pub use lsq::{least_squares_on_support, LsqSolution, RANK_TOL};
pub use projection::project_capped_simplex;
pub use relaxed::{solve_relaxed_ot, solve_relaxed_ot_traced, QpSolverConfig, RelaxedSolution};

pub(crate) use binary::binomial;
