//! Heavy-ball optimal k-thresholding (HBOT, HBOTP, HBROTω, HBROTPω) for
//! recovering a k-sparse `x` from `y = A x + ν`, with the IHT, HTP and OMP
//! baselines, the thresholding subproblem solvers, and the constants of the
//! convergence analysis.
//!
//! ```
//! use otk_core::{Algorithm, AlgorithmConfig, DenseMatrix, ProblemInstance};
//!
//! let a = DenseMatrix::identity(4);
//! let truth = vec![0.0, 2.0, 0.0, -1.0];
//! let problem = ProblemInstance::new(a, truth.clone(), 2).unwrap();
//! let run = Algorithm::Hbrotp.run(&problem, &AlgorithmConfig::default()).unwrap();
//! assert!(otk_core::linalg::dist2(&run.x_final, &truth) < 1e-10);
//! ```

pub mod algorithms;
pub mod error;
pub mod io;
pub mod linalg;
pub mod problem;
pub mod sparse;
pub mod subproblems;
pub mod theory;

pub use algorithms::{Algorithm, AlgorithmConfig, InnerFlags, RunResult, StopReason, Variant};
pub use error::{OtkError, Result};
pub use linalg::DenseMatrix;
pub use problem::{IterateTrace, ProblemInstance};
pub use sparse::SupportSet;
pub use subproblems::QpSolverConfig;
pub use theory::RicProfile;
