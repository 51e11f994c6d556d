#![allow(dead_code)]

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use otk_core::linalg::{dot, norm2};
use otk_core::DenseMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Gaussian `m x n` matrix with unit columns.
pub fn gaussian_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DenseMatrix {
    let mut a = DenseMatrix::new(m, n, gaussian_vec(rng, m * n)).unwrap();
    a.normalize_columns();
    a
}

pub fn sparse_vec(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for j in sample(rng, n, k) {
        let v: f64 = rng.sample(StandardNormal);
        // keep magnitudes away from zero so supports are unambiguous
        x[j] = v.signum() * (0.5 + v.abs());
    }
    x
}

/// Random orthogonal `n x n` matrix by modified Gram-Schmidt, rows returned.
pub fn orthogonal_rows(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v = gaussian_vec(rng, n);
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let nv = norm2(&v);
        if nv > 1e-8 {
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    basis
}

/// The first `m` rows of a random orthogonal matrix, columns renormalized.
/// Small RIC when `m` is close to `n`.
pub fn near_orthogonal(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DenseMatrix {
    let rows = orthogonal_rows(rng, n);
    let data: Vec<f64> = rows.into_iter().take(m).flatten().collect();
    let mut a = DenseMatrix::new(m, n, data).unwrap();
    a.normalize_columns();
    a
}

/// `||y - A x||_2` by explicit loops.
pub fn naive_residual_norm(a: &DenseMatrix, x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.rows() {
        let mut ax = 0.0;
        for j in 0..a.cols() {
            ax += a.get(i, j) * x[j];
        }
        s += (y[i] - ax).powi(2);
    }
    s.sqrt()
}

/// Least squares on `support` via nalgebra's SVD, as an oracle independent of the crate's QR.
pub fn lsq_oracle(a: &DenseMatrix, y: &[f64], support: &[usize]) -> Vec<f64> {
    let m = a.rows();
    let sub = nalgebra::DMatrix::from_fn(m, support.len(), |i, j| a.get(i, support[j]));
    let rhs = nalgebra::DVector::from_column_slice(y);
    let sol = sub.svd(true, true).solve(&rhs, 1e-13).unwrap();
    let mut x = vec![0.0; a.cols()];
    for (c, &j) in support.iter().enumerate() {
        x[j] = sol[c];
    }
    x
}

/// Indices of the `k` largest magnitudes, ties to the lower index, sorted.
pub fn top_k_oracle(v: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].abs().partial_cmp(&v[a].abs()).unwrap().then(a.cmp(&b)));
    let mut top = idx[..k].to_vec();
    top.sort_unstable();
    top
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Euclidean projection onto the capped simplex by bisection on the shift.
pub fn projection_oracle(v: &[f64], k: usize) -> Vec<f64> {
    let mass = |lam: f64| v.iter().map(|x| (x - lam).clamp(0.0, 1.0)).sum::<f64>();
    let mut lo = v.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > k as f64 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (mass(mid) - k as f64).abs() < 1e-13 {
            lo = mid;
            hi = mid;
            break;
        }
    }
    let lam = 0.5 * (lo + hi);
    v.iter().map(|x| (x - lam).clamp(0.0, 1.0)).collect()
}

/// `(n-1) x n` matrix with orthonormal rows whose null vector is a jittered
/// flat vector `q`; then `A^T A = I - q q^T` and small-order RICs stay near `t/n`.
pub fn flat_null_matrix(rng: &mut ChaCha8Rng, n: usize, jitter: f64) -> DenseMatrix {
    let mut q: Vec<f64> = (0..n)
        .map(|_| {
            let g: f64 = rng.sample(StandardNormal);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            sign * (1.0 + jitter * g)
        })
        .collect();
    let nq = norm2(&q);
    q.iter_mut().for_each(|v| *v /= nq);
    let mut basis = vec![q];
    while basis.len() < n {
        let mut v = gaussian_vec(rng, n);
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let nv = norm2(&v);
        if nv > 1e-8 {
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    let data: Vec<f64> = basis.into_iter().skip(1).flatten().collect();
    let mut a = DenseMatrix::new(n - 1, n, data).unwrap();
    a.normalize_columns();
    a
}

/// Square orthogonal matrix plus `eps`-scaled Gaussian noise, unit columns.
pub fn perturbed_orthogonal(rng: &mut ChaCha8Rng, n: usize, eps: f64) -> DenseMatrix {
    let rows = orthogonal_rows(rng, n);
    let data: Vec<f64> = rows
        .into_iter()
        .flatten()
        .map(|v| v + eps * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut a = DenseMatrix::new(n, n, data).unwrap();
    a.normalize_columns();
    a
}
