//! Outer iterations: the heavy-ball optimal k-thresholding family and the
//! IHT / HTP / OMP baselines.

mod baselines;
mod heavy_ball;

use std::fmt;
use std::str::FromStr;

pub use baselines::{run_htp, run_iht, run_omp};
pub use heavy_ball::{
    heavy_ball_point, heavy_ball_step, run_hbot, run_hbotp, run_hbrot, run_hbrotp, run_rotp, HeavyBallState,
    StepOutcome,
};

use crate::error::{OtkError, Result};
use crate::linalg::{dist2, norm2};
use crate::problem::{IterateTrace, ProblemInstance};
use crate::sparse::nnz;
use crate::subproblems::QpSolverConfig;

/// Consecutive near-identical iterates that trigger the stagnation stop.
pub const STAGNATION_WINDOW: usize = 3;
/// Relative step size treated as "no movement".
pub const STAGNATION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// exact binary thresholding, no re-fit
    Hbot,
    /// exact binary thresholding, least-squares re-fit
    Hbotp,
    /// `omega` relaxed compressions then hard thresholding
    Hbrot,
    /// `omega` relaxed compressions, hard thresholding, least-squares re-fit
    Hbrotp,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Hbot => "hbot",
            Variant::Hbotp => "hbotp",
            Variant::Hbrot => "hbrot",
            Variant::Hbrotp => "hbrotp",
        }
    }

    pub fn is_pursuit(self) -> bool {
        matches!(self, Variant::Hbotp | Variant::Hbrotp)
    }

    pub fn is_relaxed(self) -> bool {
        matches!(self, Variant::Hbrot | Variant::Hbrotp)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = OtkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hbot" => Ok(Variant::Hbot),
            "hbotp" => Ok(Variant::Hbotp),
            "hbrot" => Ok(Variant::Hbrot),
            "hbrotp" => Ok(Variant::Hbrotp),
            other => Err(OtkError::Argument(format!("unknown variant {other:?}"))),
        }
    }
}

/// Parameters of an outer iteration. The defaults are `alpha = 5`,
/// `beta = 0.2`, `omega = 1`, 50 iterations and `x^0 = x^1 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmConfig {
    pub variant: Variant,
    pub alpha: f64,
    pub beta: f64,
    /// Relaxed compressions per iteration (HBROT / HBROTP only).
    pub omega: usize,
    pub max_iter: usize,
    pub residual_tol: f64,
    pub qp: QpSolverConfig,
    /// `x^0`; zero when `None`.
    pub x0: Option<Vec<f64>>,
    /// `x^1`; zero when `None`.
    pub x1: Option<Vec<f64>>,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Hbrotp,
            alpha: 5.0,
            beta: 0.2,
            omega: 1,
            max_iter: 50,
            residual_tol: 1e-10,
            qp: QpSolverConfig::default(),
            x0: None,
            x1: None,
        }
    }
}

impl AlgorithmConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            ..Default::default()
        }
    }

    pub fn with_params(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(OtkError::Argument(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(OtkError::Argument(format!("beta must be >= 0, got {}", self.beta)));
        }
        if self.omega == 0 {
            return Err(OtkError::Argument("omega must be >= 1".into()));
        }
        if self.max_iter == 0 {
            return Err(OtkError::Argument("max_iter must be >= 1".into()));
        }
        if self.residual_tol.is_nan() || self.residual_tol < 0.0 {
            return Err(OtkError::Argument("residual_tol must be >= 0".into()));
        }
        self.qp.validate()
    }

    fn starting_points(&self, problem: &ProblemInstance) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = problem.n();
        let pick = |x: &Option<Vec<f64>>, label: &str| -> Result<Vec<f64>> {
            match x {
                None => Ok(vec![0.0; n]),
                Some(v) if v.len() != n => Err(OtkError::Argument(format!(
                    "{label} has length {}, expected {n}",
                    v.len()
                ))),
                Some(v) if nnz(v) > problem.k() => Err(OtkError::Argument(format!(
                    "{label} has {} nonzeros, more than k={}",
                    nnz(v),
                    problem.k()
                ))),
                Some(v) => Ok(v.clone()),
            }
        };
        Ok((pick(&self.x0, "x0")?, pick(&self.x1, "x1")?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ResidualTol,
    MaxIter,
    Stagnation,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::ResidualTol => "residual_tol",
            StopReason::MaxIter => "max_iter",
            StopReason::Stagnation => "stagnation",
        })
    }
}

/// Counts of inner-solver events that did not abort the run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InnerFlags {
    pub qp_nonconverged: usize,
    pub rank_deficient: usize,
}

impl InnerFlags {
    fn absorb(&mut self, other: InnerFlags) {
        self.qp_nonconverged += other.qp_nonconverged;
        self.rank_deficient += other.rank_deficient;
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub x_final: Vec<f64>,
    pub trace: IterateTrace,
    pub stop_reason: StopReason,
    pub inner_flags: InnerFlags,
    /// Outer iterations performed; `trace.len() == iterations + 1`.
    pub iterations: usize,
}

/// Shared stopping logic for the two-point iterations.
pub(crate) fn drive(
    problem: &ProblemInstance,
    cfg: &AlgorithmConfig,
    mut step: impl FnMut(&HeavyBallState) -> Result<(Vec<f64>, InnerFlags)>,
) -> Result<RunResult> {
    cfg.validate()?;
    let (x0, x1) = cfg.starting_points(problem)?;
    let mut trace = IterateTrace::new(problem.truth().is_some());
    let mut res = trace.push(problem, x1.clone());
    let mut state = HeavyBallState {
        x_prev: x0,
        x_curr: x1,
        p: 1,
    };
    let mut flags = InnerFlags::default();
    let mut still = 0;
    let mut iterations = 0;
    let stop_reason = loop {
        if res <= cfg.residual_tol {
            break StopReason::ResidualTol;
        }
        if still >= STAGNATION_WINDOW {
            break StopReason::Stagnation;
        }
        if iterations == cfg.max_iter {
            break StopReason::MaxIter;
        }
        let (next, f) = step(&state)?;
        flags.absorb(f);
        iterations += 1;
        let moved = dist2(&next, &state.x_curr);
        if moved <= STAGNATION_TOL * (1.0 + norm2(&state.x_curr)) {
            still += 1;
        } else {
            still = 0;
        }
        res = trace.push(problem, next.clone());
        state.x_prev = std::mem::replace(&mut state.x_curr, next);
        state.p += 1;
    };
    Ok(RunResult {
        x_final: state.x_curr,
        trace,
        stop_reason,
        inner_flags: flags,
        iterations,
    })
}

/// Every solver the crate ships, for dispatch by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Hbot,
    Hbotp,
    Hbrot,
    Hbrotp,
    /// HBROTP with `alpha = 1`, `beta = 0`.
    Rotp,
    Iht,
    Htp,
    Omp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Hbot,
        Algorithm::Hbotp,
        Algorithm::Hbrot,
        Algorithm::Hbrotp,
        Algorithm::Rotp,
        Algorithm::Iht,
        Algorithm::Htp,
        Algorithm::Omp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hbot => "hbot",
            Algorithm::Hbotp => "hbotp",
            Algorithm::Hbrot => "hbrot",
            Algorithm::Hbrotp => "hbrotp",
            Algorithm::Rotp => "rotp",
            Algorithm::Iht => "iht",
            Algorithm::Htp => "htp",
            Algorithm::Omp => "omp",
        }
    }

    /// Runs the algorithm; `cfg.variant` is overridden for the heavy-ball family.
    pub fn run(self, problem: &ProblemInstance, cfg: &AlgorithmConfig) -> Result<RunResult> {
        let with = |variant| AlgorithmConfig { variant, ..cfg.clone() };
        match self {
            Algorithm::Hbot => run_hbot(problem, &with(Variant::Hbot)),
            Algorithm::Hbotp => run_hbotp(problem, &with(Variant::Hbotp)),
            Algorithm::Hbrot => run_hbrot(problem, &with(Variant::Hbrot)),
            Algorithm::Hbrotp => run_hbrotp(problem, &with(Variant::Hbrotp)),
            Algorithm::Rotp => run_rotp(problem, cfg),
            Algorithm::Iht => run_iht(problem, cfg),
            Algorithm::Htp => run_htp(problem, cfg),
            Algorithm::Omp => run_omp(problem, cfg),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = OtkError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| OtkError::Argument(format!("unknown algorithm {s:?}")))
    }
}
