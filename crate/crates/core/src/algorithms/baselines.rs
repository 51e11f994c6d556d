use crate::error::Result;
use crate::linalg::residual;
use crate::problem::{IterateTrace, ProblemInstance};
use crate::sparse::{hard_threshold, top_k_indices, SupportSet};
use crate::subproblems::least_squares_on_support;

use super::{drive, AlgorithmConfig, InnerFlags, RunResult, StopReason};

fn gradient_point(problem: &ProblemInstance, x: &[f64]) -> Result<Vec<f64>> {
    let r = residual(problem.a(), x, problem.y())?;
    let g = problem.a().t_matvec(&r);
    Ok(x.iter().zip(&g).map(|(a, b)| a + b).collect())
}

/// Iterative hard thresholding with unit step: `x <- H_k(x + A^T (y - A x))`.
/// Uses `cfg`'s iteration cap, tolerance and starting point `x^1`.
pub fn run_iht(problem: &ProblemInstance, cfg: &AlgorithmConfig) -> Result<RunResult> {
    drive(problem, cfg, |state| {
        let u = gradient_point(problem, &state.x_curr)?;
        Ok((hard_threshold(&u, problem.k())?, InnerFlags::default()))
    })
}

/// Hard thresholding pursuit: the IHT support followed by a least-squares re-fit.
pub fn run_htp(problem: &ProblemInstance, cfg: &AlgorithmConfig) -> Result<RunResult> {
    drive(problem, cfg, |state| {
        let u = gradient_point(problem, &state.x_curr)?;
        let support = top_k_indices(&u, problem.k())?;
        let lsq = least_squares_on_support(problem.a(), problem.y(), &support)?;
        let flags = InnerFlags {
            rank_deficient: lsq.rank_deficient as usize,
            ..Default::default()
        };
        Ok((lsq.x, flags))
    })
}

/// Orthogonal matching pursuit, exactly `k` greedy selections with a
/// least-squares re-fit after each. Ignores the heavy-ball parameters.
pub fn run_omp(problem: &ProblemInstance, cfg: &AlgorithmConfig) -> Result<RunResult> {
    cfg.validate()?;
    let (a, y, n) = (problem.a(), problem.y(), problem.n());
    let mut trace = IterateTrace::new(problem.truth().is_some());
    let mut x = vec![0.0; n];
    trace.push(problem, x.clone());
    let mut chosen: Vec<usize> = Vec::with_capacity(problem.k());
    let mut flags = InnerFlags::default();
    let mut r = y.to_vec();
    for _ in 0..problem.k() {
        let corr = a.t_matvec(&r);
        let mut best: Option<(usize, f64)> = None;
        for (j, c) in corr.iter().enumerate() {
            if chosen.contains(&j) {
                continue;
            }
            if best.is_none_or(|(_, b)| c.abs() > b) {
                best = Some((j, c.abs()));
            }
        }
        let Some((j, _)) = best else { break };
        chosen.push(j);
        let support = SupportSet::new(chosen.clone(), n)?;
        let lsq = least_squares_on_support(a, y, &support)?;
        flags.rank_deficient += lsq.rank_deficient as usize;
        x = lsq.x;
        r = residual(a, &x, y)?;
        trace.push(problem, x.clone());
    }
    let iterations = trace.len() - 1;
    let final_res = trace.residual_norms.last().copied().unwrap_or(0.0);
    Ok(RunResult {
        x_final: x,
        trace,
        stop_reason: if final_res <= cfg.residual_tol {
            StopReason::ResidualTol
        } else {
            StopReason::MaxIter
        },
        inner_flags: flags,
        iterations,
    })
}
