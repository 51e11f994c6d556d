use crate::error::{check_len, OtkError, Result};
use crate::linalg::DenseMatrix;
use crate::problem::ProblemInstance;
use crate::sparse::{hadamard, hard_threshold, SupportSet};
use crate::subproblems::{least_squares_on_support, solve_binary_ot, solve_relaxed_ot};

use super::{drive, AlgorithmConfig, InnerFlags, RunResult, Variant};

/// The two most recent iterates `x^{p-1}`, `x^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeavyBallState {
    pub x_prev: Vec<f64>,
    pub x_curr: Vec<f64>,
    pub p: usize,
}

impl HeavyBallState {
    pub fn new(x_prev: Vec<f64>, x_curr: Vec<f64>) -> Self {
        Self { x_prev, x_curr, p: 1 }
    }
}

/// `u^p = x^p + alpha A^T (y - A x^p) + beta (x^p - x^{p-1})`.
pub fn heavy_ball_point(a: &DenseMatrix, y: &[f64], state: &HeavyBallState, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    check_len("heavy-ball: x^p against matrix columns", a.cols(), state.x_curr.len())?;
    check_len(
        "heavy-ball: x^{p-1} against matrix columns",
        a.cols(),
        state.x_prev.len(),
    )?;
    let r = crate::linalg::residual(a, &state.x_curr, y)?;
    let g = a.t_matvec(&r);
    Ok(state
        .x_curr
        .iter()
        .zip(&state.x_prev)
        .zip(&g)
        .map(|((x, xp), gi)| x + alpha * gi + beta * (x - xp))
        .collect())
}

/// Everything one outer iteration produces.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    /// heavy-ball point `u^p`
    pub u: Vec<f64>,
    /// `u^p ⊗ w*` (HBOT/HBOTP) or `x♯` (HBROT/HBROTP), before any re-fit
    pub thresholded: Vec<f64>,
    /// `x^{p+1}`
    pub next: Vec<f64>,
    pub flags: InnerFlags,
}

/// One S1–S3 pass of the variant selected in `cfg`.
pub fn heavy_ball_step(
    problem: &ProblemInstance,
    cfg: &AlgorithmConfig,
    state: &HeavyBallState,
) -> Result<StepOutcome> {
    let (a, y, k) = (problem.a(), problem.y(), problem.k());
    let u = heavy_ball_point(a, y, state, cfg.alpha, cfg.beta)?;
    let mut flags = InnerFlags::default();

    let thresholded = if cfg.variant.is_relaxed() {
        let mut v = u.clone();
        for _ in 0..cfg.omega {
            let sol = solve_relaxed_ot(a, y, &v, k, &cfg.qp)?;
            if !sol.converged {
                flags.qp_nonconverged += 1;
            }
            v = hadamard(&v, &sol.w)?;
        }
        hard_threshold(&v, k)?
    } else {
        let sol = solve_binary_ot(a, y, &u, k)?;
        hadamard(&u, &sol.w)?
    };

    let next = if cfg.variant.is_pursuit() {
        let lsq = least_squares_on_support(a, y, &SupportSet::of(&thresholded))?;
        if lsq.rank_deficient {
            flags.rank_deficient += 1;
        }
        lsq.x
    } else {
        thresholded.clone()
    };
    Ok(StepOutcome {
        u,
        thresholded,
        next,
        flags,
    })
}

fn run_variant(problem: &ProblemInstance, cfg: &AlgorithmConfig, expected: Variant) -> Result<RunResult> {
    if cfg.variant != expected {
        return Err(OtkError::Argument(format!(
            "config variant {} does not match requested {}",
            cfg.variant, expected
        )));
    }
    drive(problem, cfg, |state| {
        heavy_ball_step(problem, cfg, state).map(|s| (s.next, s.flags))
    })
}

/// Heavy-ball optimal k-thresholding. Limited to `n <= 30` by the exact solver.
pub fn run_hbot(problem: &ProblemInstance, cfg: &AlgorithmConfig) -> Result<RunResult> {
    run_variant(problem, cfg, Variant::Hbot)
}

/// HBOT followed by a least-squares re-fit on the selected support.
pub fn run_hbotp(problem: &ProblemInstance, cfg: &AlgorithmConfig) -> Result<RunResult> {
    run_variant(problem, cfg, Variant::Hbotp)
}

pub fn run_hbrot(problem: &ProblemInstance, cfg: &AlgorithmConfig) -> Result<RunResult> {
    run_variant(problem, cfg, Variant::Hbrot)
}

pub fn run_hbrotp(problem: &ProblemInstance, cfg: &AlgorithmConfig) -> Result<RunResult> {
    run_variant(problem, cfg, Variant::Hbrotp)
}

/// Relaxed optimal k-thresholding pursuit: HBROTP with `alpha = 1`, `beta = 0`.
pub fn run_rotp(problem: &ProblemInstance, cfg: &AlgorithmConfig) -> Result<RunResult> {
    let cfg = AlgorithmConfig {
        variant: Variant::Hbrotp,
        alpha: 1.0,
        beta: 0.0,
        ..cfg.clone()
    };
    run_hbrotp(problem, &cfg)
}
