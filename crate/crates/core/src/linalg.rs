//! Dense row-major matrices and the handful of vector kernels the solvers need.

use crate::error::{check_len, OtkError, Result};

/// A dense `rows x cols` matrix of finite reals stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(OtkError::Argument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        check_len("matrix entries", rows * cols, data.len())?;
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(OtkError::Argument(format!(
                "non-finite matrix entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 }).expect("identity is valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// `A x`. Panics if `x.len() != cols`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.matvec_into(x, &mut out);
        out
    }

    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.cols, "matvec operand length");
        assert_eq!(out.len(), self.rows, "matvec output length");
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *o = dot(row, x);
        }
    }

    /// `A^T r`. Panics if `r.len() != rows`.
    pub fn t_matvec(&self, r: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        self.t_matvec_into(r, &mut out);
        out
    }

    pub fn t_matvec_into(&self, r: &[f64], out: &mut [f64]) {
        assert_eq!(r.len(), self.rows, "t_matvec operand length");
        assert_eq!(out.len(), self.cols, "t_matvec output length");
        out.iter_mut().for_each(|o| *o = 0.0);
        for (&ri, row) in r.iter().zip(self.data.chunks_exact(self.cols)) {
            if ri != 0.0 {
                axpy(ri, row, out);
            }
        }
    }

    /// The column submatrix `A_S` with columns in the order given.
    pub fn select_columns(&self, idx: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(idx.iter().map(|&j| row[j]));
        }
        DenseMatrix {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// `A_S^T A_S` as a row-major `|S| x |S|` block.
    pub fn gram_block(&self, idx: &[usize]) -> Vec<f64> {
        let s = idx.len();
        let mut g = vec![0.0; s * s];
        for row in self.data.chunks_exact(self.cols) {
            for (a, &ja) in idx.iter().enumerate() {
                let va = row[ja];
                if va == 0.0 {
                    continue;
                }
                for (b, &jb) in idx.iter().enumerate().skip(a) {
                    g[a * s + b] += va * row[jb];
                }
            }
        }
        for a in 0..s {
            for b in 0..a {
                g[a * s + b] = g[b * s + a];
            }
        }
        g
    }

    /// `A diag(d)`, each column scaled by the matching entry of `d`.
    pub fn scale_columns(&self, d: &[f64]) -> DenseMatrix {
        assert_eq!(d.len(), self.cols, "column scale length");
        let mut data = self.data.clone();
        for row in data.chunks_exact_mut(self.cols) {
            row.iter_mut().zip(d).for_each(|(a, s)| *a *= s);
        }
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn column_norms(&self) -> Vec<f64> {
        let mut sq = vec![0.0; self.cols];
        for row in self.data.chunks_exact(self.cols) {
            sq.iter_mut().zip(row).for_each(|(s, a)| *s += a * a);
        }
        sq.into_iter().map(f64::sqrt).collect()
    }

    /// Scales every nonzero column to unit Euclidean norm.
    pub fn normalize_columns(&mut self) {
        let norms = self.column_norms();
        for row in self.data.chunks_exact_mut(self.cols) {
            for (a, &n) in row.iter_mut().zip(&norms) {
                if n > 0.0 {
                    *a /= n;
                }
            }
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        DenseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `y - A x`.
pub fn residual(a: &DenseMatrix, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_len("residual: x against matrix columns", a.cols(), x.len())?;
    check_len("residual: y against matrix rows", a.rows(), y.len())?;
    let mut r = y.to_vec();
    for (ri, row) in r.iter_mut().zip(a.as_slice().chunks_exact(a.cols())) {
        *ri -= dot(row, x);
    }
    Ok(r)
}

pub fn residual_norm(a: &DenseMatrix, x: &[f64], y: &[f64]) -> Result<f64> {
    residual(a, x, y).map(|r| norm2(&r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_residual(a: &DenseMatrix, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..a.rows() {
            let mut s = 0.0;
            for j in 0..a.cols() {
                s += a.get(i, j) * x[j];
            }
            out.push(y[i] - s);
        }
        out
    }

    #[test]
    fn residual_identity_and_zero() {
        let a = DenseMatrix::identity(4);
        let y = vec![1.0, -2.0, 3.5, 0.25];
        assert_eq!(residual(&a, &y, &y).unwrap(), vec![0.0; 4]);
        let r = residual(&a, &[0.0; 4], &y).unwrap();
        assert_eq!(r, y);
    }

    #[test]
    fn residual_matches_triple_loop() {
        let a = DenseMatrix::from_fn(3, 5, |i, j| ((i * 7 + j * 3) as f64).sin()).unwrap();
        let x = [0.3, -1.2, 0.0, 2.2, 0.7];
        let y = [1.0, 0.5, -0.25];
        let got = residual(&a, &x, &y).unwrap();
        let want = naive_residual(&a, &x, &y);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-14);
        }
    }

    #[test]
    fn residual_dimension_error() {
        let a = DenseMatrix::identity(3);
        assert!(matches!(
            residual(&a, &[1.0, 2.0], &[0.0; 3]),
            Err(OtkError::Dimension { .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(DenseMatrix::new(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn t_matvec_agrees_with_transpose() {
        let a = DenseMatrix::from_fn(4, 6, |i, j| (i as f64 + 1.0) * 0.5 - j as f64 * 0.3).unwrap();
        let r = [1.0, -1.0, 0.5, 2.0];
        let via_t = a.transpose().matvec(&r);
        let direct = a.t_matvec(&r);
        for (p, q) in via_t.iter().zip(&direct) {
            assert!((p - q).abs() < 1e-14);
        }
    }

    #[test]
    fn gram_block_is_symmetric_product() {
        let a = DenseMatrix::from_fn(5, 4, |i, j| ((i + 2 * j) as f64).cos()).unwrap();
        let idx = [3, 0, 2];
        let g = a.gram_block(&idx);
        for (p, &jp) in idx.iter().enumerate() {
            for (q, &jq) in idx.iter().enumerate() {
                let want = dot(&a.column(jp), &a.column(jq));
                assert!((g[p * 3 + q] - want).abs() < 1e-14);
            }
        }
    }
}
