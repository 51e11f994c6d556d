use crate::error::{check_len, OtkError, Result};
use crate::linalg::DenseMatrix;

/// Largest dimension accepted by [`solve_binary_ot`].
pub const BINARY_OT_MAX_N: usize = 30;

#[derive(Debug, Clone)]
pub struct BinarySolution {
    pub w: Vec<f64>,
    /// `||y - A (v ⊗ w)||_2^2`
    pub objective: f64,
}

/// Exact optimal k-thresholding: minimizes `||y - A (v ⊗ w)||^2` over binary
/// `w` with exactly `k` ones by enumerating every k-subset.
///
/// Subsets are visited in lexicographic order and only a strictly smaller
/// objective replaces the incumbent, so ties resolve to the lexicographically
/// smallest support.
pub fn solve_binary_ot(a: &DenseMatrix, y: &[f64], v: &[f64], k: usize) -> Result<BinarySolution> {
    let (m, n) = (a.rows(), a.cols());
    check_len("binary OT: v against matrix columns", n, v.len())?;
    check_len("binary OT: y against matrix rows", m, y.len())?;
    if n > BINARY_OT_MAX_N {
        return Err(OtkError::Guard {
            what: "binary optimal k-thresholding (use the relaxed solver)",
            required: binomial(n as u64, k as u64),
            limit: binomial(BINARY_OT_MAX_N as u64, (BINARY_OT_MAX_N / 2) as u64),
        });
    }
    if k == 0 || k > n {
        return Err(OtkError::Argument(format!("k={k} must satisfy 1 <= k <= {n}")));
    }

    // scaled columns v_j a_j, stored contiguously
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| a.column(j).into_iter().map(|x| x * v[j]).collect())
        .collect();

    let mut search = Search {
        cols: &cols,
        n,
        k,
        chosen: Vec::with_capacity(k),
        best: Vec::new(),
        best_obj: f64::INFINITY,
    };
    let mut r = y.to_vec();
    search.descend(0, &mut r);

    let mut w = vec![0.0; n];
    for &j in &search.best {
        w[j] = 1.0;
    }
    let vw: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a * b).collect();
    let res = crate::linalg::residual(a, &vw, y)?;
    Ok(BinarySolution {
        w,
        objective: crate::linalg::dot(&res, &res),
    })
}

struct Search<'a> {
    cols: &'a [Vec<f64>],
    n: usize,
    k: usize,
    chosen: Vec<usize>,
    best: Vec<usize>,
    best_obj: f64,
}

impl Search<'_> {
    fn descend(&mut self, from: usize, r: &mut [f64]) {
        if self.chosen.len() == self.k {
            let obj = crate::linalg::dot(r, r);
            if obj < self.best_obj {
                self.best_obj = obj;
                self.best.clone_from(&self.chosen);
            }
            return;
        }
        let remaining = self.k - self.chosen.len();
        for j in from..=(self.n - remaining) {
            let col = &self.cols[j];
            r.iter_mut().zip(col).for_each(|(ri, c)| *ri -= c);
            self.chosen.push(j);
            self.descend(j + 1, r);
            self.chosen.pop();
            r.iter_mut().zip(col).for_each(|(ri, c)| *ri += c);
        }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_identity_support() {
        // 4x4 identity, v = e, y = e1 + e2
        let a = DenseMatrix::identity(4);
        let y = [1.0, 1.0, 0.0, 0.0];
        let sol = solve_binary_ot(&a, &y, &[1.0; 4], 2).unwrap();
        assert_eq!(sol.w, vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn full_selection() {
        let a = DenseMatrix::from_fn(3, 4, |i, j| (i as f64 - j as f64) * 0.3 + 1.0).unwrap();
        let v = [0.5, -1.0, 2.0, 0.1];
        let y = [1.0, 0.0, -1.0];
        let sol = solve_binary_ot(&a, &y, &v, 4).unwrap();
        assert_eq!(sol.w, vec![1.0; 4]);
        let r = crate::linalg::residual(&a, &v, &y).unwrap();
        assert!((sol.objective - crate::linalg::dot(&r, &r)).abs() < 1e-14);
    }

    #[test]
    fn ties_go_to_smallest_support() {
        let a = DenseMatrix::identity(4);
        let sol = solve_binary_ot(&a, &[0.0; 4], &[0.0; 4], 2).unwrap();
        assert_eq!(sol.w, vec![1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn guard_refuses_large_n() {
        let a = DenseMatrix::from_fn(2, 31, |_, _| 1.0).unwrap();
        let err = solve_binary_ot(&a, &[0.0; 2], &[1.0; 31], 2).unwrap_err();
        assert!(matches!(err, OtkError::Guard { .. }));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 2), 28);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(3, 5), 0);
    }
}
