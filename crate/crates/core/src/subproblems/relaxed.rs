use crate::error::{check_len, OtkError, Result};
use crate::linalg::{dot, norm2, DenseMatrix};

use super::project_capped_simplex;

/// Stopping rules for the capped-simplex QP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpSolverConfig {
    pub max_inner_iter: usize,
    /// Bound on `||w - P(w - grad f(w) / L)||_2`, the projected-gradient residual.
    pub grad_tol: f64,
    /// The solve also stops once `f(w) <= objective_rel_tol * ||y||^2`, which
    /// certifies optimality within that relative margin since `f >= 0`.
    pub objective_rel_tol: f64,
}

impl Default for QpSolverConfig {
    fn default() -> Self {
        Self {
            max_inner_iter: 2000,
            grad_tol: 1e-9,
            objective_rel_tol: 1e-12,
        }
    }
}

impl QpSolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0;
        if self.max_inner_iter == 0 || !positive(self.grad_tol) || !positive(self.objective_rel_tol) {
            return Err(OtkError::Argument(format!("invalid QP solver config {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RelaxedSolution {
    pub w: Vec<f64>,
    /// `||y - A (v ⊗ w)||_2^2`
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `||y - A (v ⊗ w)||^2` over the capped simplex `P^k`.
///
/// Accelerated projected gradient on `f(w) = ||y - B w||^2` with
/// `B = A diag(v)`; the momentum is dropped whenever a step would increase `f`,
/// so accepted objectives never go up. When the run hits `max_inner_iter` the
/// best point found is returned with `converged == false`.
pub fn solve_relaxed_ot(
    a: &DenseMatrix,
    y: &[f64],
    v: &[f64],
    k: usize,
    cfg: &QpSolverConfig,
) -> Result<RelaxedSolution> {
    solve_relaxed_inner(a, y, v, k, cfg, None)
}

/// Same as [`solve_relaxed_ot`], also recording every accepted objective value.
pub fn solve_relaxed_ot_traced(
    a: &DenseMatrix,
    y: &[f64],
    v: &[f64],
    k: usize,
    cfg: &QpSolverConfig,
) -> Result<(RelaxedSolution, Vec<f64>)> {
    let mut history = Vec::new();
    let sol = solve_relaxed_inner(a, y, v, k, cfg, Some(&mut history))?;
    Ok((sol, history))
}

/// Largest eigenvalue of `B^T B` by power iteration from a fixed start.
fn gram_spectral_norm(b: &DenseMatrix) -> f64 {
    let n = b.cols();
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * ((i * 7919) % 101) as f64).collect();
    let mut lambda = 0.0;
    let mut bx = vec![0.0; b.rows()];
    let mut btbx = vec![0.0; n];
    for _ in 0..100 {
        let nx = norm2(&x);
        if nx == 0.0 {
            return 0.0;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        b.matvec_into(&x, &mut bx);
        b.t_matvec_into(&bx, &mut btbx);
        let next = dot(&x, &btbx);
        std::mem::swap(&mut x, &mut btbx);
        if (next - lambda).abs() <= 1e-10 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda
}

fn objective(by: &[f64], y: &[f64]) -> f64 {
    y.iter().zip(by).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn solve_relaxed_inner(
    a: &DenseMatrix,
    y: &[f64],
    v: &[f64],
    k: usize,
    cfg: &QpSolverConfig,
    mut history: Option<&mut Vec<f64>>,
) -> Result<RelaxedSolution> {
    let (m, n) = (a.rows(), a.cols());
    check_len("relaxed OT: v against matrix columns", n, v.len())?;
    check_len("relaxed OT: y against matrix rows", m, y.len())?;
    cfg.validate()?;
    if k == 0 || k > n {
        return Err(OtkError::Argument(format!("k={k} must satisfy 1 <= k <= {n}")));
    }

    let b = a.scale_columns(v);
    let y_sq = dot(y, y);
    let zero_tol = cfg.objective_rel_tol * y_sq;

    // Start from the hard-threshold indicator of v, projected for safety.
    let start = crate::sparse::top_k_indices(v, k)?.indicator(n);
    let mut w = project_capped_simplex(&start, k)?;
    let mut bw = b.matvec(&w);
    let mut f_w = objective(&bw, y);
    if let Some(h) = history.as_deref_mut() {
        h.push(f_w);
    }

    // f(w) = ||y - Bw||^2 has gradient 2 B^T (Bw - y) and curvature 2 λmax(B^T B).
    let mut lip = 2.0 * gram_spectral_norm(&b) * 1.02;
    if lip == 0.0 || f_w <= zero_tol {
        return Ok(RelaxedSolution {
            w,
            objective: f_w,
            iterations: 0,
            converged: true,
        });
    }

    let mut z = w.clone();
    let mut bz = bw.clone();
    let mut t = 1.0f64;
    let mut grad = vec![0.0; n];
    let mut resid = vec![0.0; m];
    let mut trial = vec![0.0; n];
    let mut b_trial = vec![0.0; m];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_inner_iter {
        iterations += 1;
        // gradient at the extrapolated point z
        for i in 0..m {
            resid[i] = bz[i] - y[i];
        }
        b.t_matvec_into(&resid, &mut grad);
        for i in 0..n {
            trial[i] = z[i] - 2.0 * grad[i] / lip;
        }
        let mut next = project_capped_simplex(&trial, k)?;
        b.matvec_into(&next, &mut b_trial);
        let mut f_next = objective(&b_trial, y);

        if f_next > f_w {
            // restart: plain projected step from w, tightening L until it descends
            t = 1.0;
            for i in 0..m {
                resid[i] = bw[i] - y[i];
            }
            b.t_matvec_into(&resid, &mut grad);
            loop {
                for i in 0..n {
                    trial[i] = w[i] - 2.0 * grad[i] / lip;
                }
                next = project_capped_simplex(&trial, k)?;
                b.matvec_into(&next, &mut b_trial);
                f_next = objective(&b_trial, y);
                if f_next <= f_w || lip > 1e300 {
                    break;
                }
                lip *= 2.0;
            }
            if f_next > f_w {
                break;
            }
        }

        // projected-gradient residual at the new point
        let step: f64 = next.iter().zip(&w).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let mom = (t - 1.0) / t_next;
        for i in 0..n {
            z[i] = next[i] + mom * (next[i] - w[i]);
        }
        for i in 0..m {
            bz[i] = b_trial[i] + mom * (b_trial[i] - bw[i]);
        }
        t = t_next;
        std::mem::swap(&mut w, &mut next);
        std::mem::swap(&mut bw, &mut b_trial);
        f_w = f_next;
        if let Some(h) = history.as_deref_mut() {
            h.push(f_w);
        }

        if f_w <= zero_tol {
            converged = true;
            break;
        }
        if step <= cfg.grad_tol && projected_gradient_residual(&b, y, &w, &bw, k, lip)? <= cfg.grad_tol {
            converged = true;
            break;
        }
    }

    // Recompute the objective from scratch to shed accumulated drift.
    let vw: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a * b).collect();
    let objective = objective(&a.matvec(&vw), y);
    Ok(RelaxedSolution {
        w,
        objective,
        iterations,
        converged,
    })
}

fn projected_gradient_residual(b: &DenseMatrix, y: &[f64], w: &[f64], bw: &[f64], k: usize, lip: f64) -> Result<f64> {
    let resid: Vec<f64> = bw.iter().zip(y).map(|(a, b)| a - b).collect();
    let grad = b.t_matvec(&resid);
    let trial: Vec<f64> = w.iter().zip(&grad).map(|(wi, g)| wi - 2.0 * g / lip).collect();
    let p = project_capped_simplex(&trial, k)?;
    Ok(p.iter().zip(w).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}
