use nalgebra::DMatrix;

use crate::error::{check_len, OtkError, Result};
use crate::linalg::DenseMatrix;
use crate::sparse::SupportSet;

/// Relative threshold on `|R_ii|` below which `A_S` is treated as rank deficient.
pub const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LsqSolution {
    /// Length-`n` solution, zero outside the support.
    pub x: Vec<f64>,
    /// Set when `A_S` was numerically rank deficient and the minimum-norm
    /// solution was returned instead.
    pub rank_deficient: bool,
}

/// `argmin ||y - A x||_2` subject to `supp(x) ⊆ S`, via Householder QR of `A_S`.
pub fn least_squares_on_support(a: &DenseMatrix, y: &[f64], support: &SupportSet) -> Result<LsqSolution> {
    check_len("least squares: y against matrix rows", a.rows(), y.len())?;
    let n = a.cols();
    if let Some(&j) = support.indices().last() {
        if j >= n {
            return Err(OtkError::Argument(format!("support index {j} out of range for n={n}")));
        }
    }
    let idx = support.indices();
    let mut x = vec![0.0; n];
    if idx.is_empty() {
        return Ok(LsqSolution {
            x,
            rank_deficient: false,
        });
    }
    let sub = a.select_columns(idx);
    let (coef, rank_deficient) = match householder_solve(&sub, y) {
        Some(c) => (c, false),
        None => (min_norm_solve(&sub, y), true),
    };
    for (&j, c) in idx.iter().zip(coef) {
        x[j] = c;
    }
    Ok(LsqSolution { x, rank_deficient })
}

/// Returns `None` when the factor is rank deficient or `A_S` is wider than tall.
fn householder_solve(b: &DenseMatrix, y: &[f64]) -> Option<Vec<f64>> {
    let (m, s) = (b.rows(), b.cols());
    if s > m {
        return None;
    }
    // column-major working copy
    let mut r: Vec<Vec<f64>> = (0..s).map(|j| b.column(j)).collect();
    let mut qty = y.to_vec();
    for j in 0..s {
        let norm = r[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let alpha = if r[j][j] > 0.0 { -norm } else { norm };
        let mut hv: Vec<f64> = r[j][j..].to_vec();
        hv[0] -= alpha;
        let hv_sq: f64 = hv.iter().map(|v| v * v).sum();
        if hv_sq > 0.0 {
            let reflect = |col: &mut [f64]| {
                let proj = 2.0 * hv.iter().zip(col.iter()).map(|(a, b)| a * b).sum::<f64>() / hv_sq;
                col.iter_mut().zip(&hv).for_each(|(c, h)| *c -= proj * h);
            };
            for col in r.iter_mut().skip(j + 1) {
                reflect(&mut col[j..]);
            }
            reflect(&mut qty[j..]);
        }
        r[j][j] = alpha;
        r[j][j + 1..].iter_mut().for_each(|v| *v = 0.0);
    }
    let max_diag = (0..s).map(|j| r[j][j].abs()).fold(0.0, f64::max);
    if (0..s).any(|j| r[j][j].abs() < RANK_TOL * max_diag) {
        return None;
    }
    let mut coef = vec![0.0; s];
    for i in (0..s).rev() {
        let mut acc = qty[i];
        for j in i + 1..s {
            acc -= r[j][i] * coef[j];
        }
        coef[i] = acc / r[i][i];
    }
    Some(coef)
}

fn min_norm_solve(b: &DenseMatrix, y: &[f64]) -> Vec<f64> {
    let mat = DMatrix::from_row_slice(b.rows(), b.cols(), b.as_slice());
    let rhs = nalgebra::DVector::from_column_slice(y);
    let svd = mat.svd(true, true);
    let max_sv = svd.singular_values.max();
    let sol = svd
        .solve(&rhs, RANK_TOL * max_sv)
        .expect("both singular vector sets were computed");
    sol.iter().copied().collect()
}
