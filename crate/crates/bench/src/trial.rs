use std::time::Instant;

use otk_core::linalg::{dist2, norm2};
use otk_core::{Algorithm, AlgorithmConfig};

use crate::ensemble::{generate_instance, EnsembleSpec};

/// Relative error at or below which a trial counts as a recovery.
pub const SUCCESS_TOL: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub spec: EnsembleSpec,
    pub algorithm: Algorithm,
    pub config: AlgorithmConfig,
    pub success: bool,
    pub iterations: usize,
    pub wall_time: f64,
    /// `||x − x*|| / ||x*||`; NaN when the run failed.
    pub rel_error: f64,
    /// Message of the error that ended the trial, if any.
    pub error: Option<String>,
}

/// Generates the instance, runs `algorithm` on it and scores the result.
/// Solver errors (for example the exact-solver size guard) become failed
/// trials rather than propagating.
pub fn run_trial(spec: &EnsembleSpec, algorithm: Algorithm, config: &AlgorithmConfig) -> TrialRecord {
    let mut record = TrialRecord {
        spec: *spec,
        algorithm,
        config: config.clone(),
        success: false,
        iterations: 0,
        wall_time: 0.0,
        rel_error: f64::NAN,
        error: None,
    };
    let problem = match generate_instance(spec) {
        Ok(p) => p,
        Err(e) => {
            record.error = Some(e.to_string());
            return record;
        }
    };
    let start = Instant::now();
    let outcome = algorithm.run(&problem, config);
    record.wall_time = start.elapsed().as_secs_f64();
    match outcome {
        Ok(run) => {
            let truth = problem.truth().expect("generated instances carry their truth");
            record.iterations = run.iterations;
            record.rel_error = dist2(&run.x_final, truth) / norm2(truth);
            record.success = record.rel_error <= SUCCESS_TOL;
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}
