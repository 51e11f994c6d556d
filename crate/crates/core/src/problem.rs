//! The shared problem and trace data model.

use crate::error::{check_len, OtkError, Result};
use crate::linalg::{norm2, residual_norm, DenseMatrix};
use crate::sparse::SupportSet;

/// `y = A x + noise` with target sparsity `k`.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    a: DenseMatrix,
    y: Vec<f64>,
    k: usize,
    truth: Option<Vec<f64>>,
    noise: Option<Vec<f64>>,
}

impl ProblemInstance {
    pub fn new(a: DenseMatrix, y: Vec<f64>, k: usize) -> Result<Self> {
        check_len("observation length", a.rows(), y.len())?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(OtkError::Argument("observation has non-finite entries".into()));
        }
        if k == 0 || k > a.rows() || k > a.cols() {
            return Err(OtkError::Argument(format!(
                "sparsity k={k} must satisfy 1 <= k <= min(m, n) = {}",
                a.rows().min(a.cols())
            )));
        }
        Ok(Self {
            a,
            y,
            k,
            truth: None,
            noise: None,
        })
    }

    pub fn with_truth(mut self, truth: Vec<f64>) -> Result<Self> {
        check_len("ground truth length", self.a.cols(), truth.len())?;
        self.truth = Some(truth);
        self.check_consistency()?;
        Ok(self)
    }

    pub fn with_noise(mut self, noise: Vec<f64>) -> Result<Self> {
        check_len("noise length", self.a.rows(), noise.len())?;
        self.noise = Some(noise);
        self.check_consistency()?;
        Ok(self)
    }

    fn check_consistency(&self) -> Result<()> {
        let (Some(truth), Some(noise)) = (&self.truth, &self.noise) else {
            return Ok(());
        };
        let ax = self.a.matvec(truth);
        let gap: f64 = self
            .y
            .iter()
            .zip(ax.iter().zip(noise))
            .map(|(y, (a, e))| (y - a - e).powi(2))
            .sum::<f64>()
            .sqrt();
        let scale = norm2(&self.y).max(norm2(&ax)).max(1.0);
        if gap > 1e-12 * scale {
            return Err(OtkError::Argument(format!(
                "observation disagrees with A*truth + noise by {gap:e}"
            )));
        }
        Ok(())
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn truth(&self) -> Option<&[f64]> {
        self.truth.as_deref()
    }

    pub fn noise(&self) -> Option<&[f64]> {
        self.noise.as_deref()
    }
}

/// Per-iteration record of a run. `iterates[0]` is the starting point `x^1`.
#[derive(Debug, Clone, Default)]
pub struct IterateTrace {
    pub iterates: Vec<Vec<f64>>,
    pub residual_norms: Vec<f64>,
    pub supports: Vec<SupportSet>,
    pub errors_to_truth: Option<Vec<f64>>,
}

impl IterateTrace {
    pub(crate) fn new(track_error: bool) -> Self {
        Self {
            errors_to_truth: track_error.then(Vec::new),
            ..Default::default()
        }
    }

    pub(crate) fn push(&mut self, problem: &ProblemInstance, x: Vec<f64>) -> f64 {
        let res = residual_norm(problem.a(), &x, problem.y()).expect("iterate has length n");
        if let (Some(errs), Some(t)) = (self.errors_to_truth.as_mut(), problem.truth()) {
            errs.push(crate::linalg::dist2(&x, t));
        }
        self.supports.push(SupportSet::of(&x));
        self.residual_norms.push(res);
        self.iterates.push(x);
        res
    }

    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.iterates.last().map(Vec::as_slice)
    }
}
