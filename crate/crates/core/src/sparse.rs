//! Supports, the `L_k` index selector, hard thresholding and the Hadamard product.

use std::cmp::Ordering;

use crate::error::{check_len, OtkError, Result};

/// A strictly increasing list of 0-based coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    /// Builds a support from arbitrary indices; sorts and rejects duplicates or
    /// indices `>= n`.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(OtkError::Argument(format!("duplicate support index {}", w[0])));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(OtkError::Argument(format!(
                    "support index {last} out of range for dimension {n}"
                )));
            }
        }
        Ok(Self(indices))
    }

    /// Indices of the nonzero entries of `v`.
    pub fn of(v: &[f64]) -> Self {
        Self(
            v.iter()
                .enumerate()
                .filter(|(_, x)| **x != 0.0)
                .map(|(i, _)| i)
                .collect(),
        )
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// 0/1 indicator vector of length `n`.
    pub fn indicator(&self, n: usize) -> Vec<f64> {
        let mut w = vec![0.0; n];
        for &i in &self.0 {
            w[i] = 1.0;
        }
        w
    }

    /// Copy of `v` with every coordinate outside the support zeroed.
    pub fn restrict(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for &i in &self.0 {
            out[i] = v[i];
        }
        out
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(OtkError::Argument(format!(
            "sparsity level k={k} must satisfy 1 <= k <= {n}"
        )));
    }
    Ok(())
}

/// `L_k(v)`: indices of the `k` largest absolute entries. Equal magnitudes are
/// ranked by smaller index first.
pub fn top_k_indices(v: &[f64], k: usize) -> Result<SupportSet> {
    check_k(k, v.len())?;
    let mut order: Vec<usize> = (0..v.len()).collect();
    let by_magnitude = |a: &usize, b: &usize| -> Ordering {
        v[*b]
            .abs()
            .partial_cmp(&v[*a].abs())
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(b))
    };
    if k < v.len() {
        order.select_nth_unstable_by(k - 1, by_magnitude);
        order.truncate(k);
    }
    order.sort_unstable();
    Ok(SupportSet(order))
}

/// `H_k(v)`: keeps the entries selected by [`top_k_indices`] and zeroes the rest.
pub fn hard_threshold(v: &[f64], k: usize) -> Result<Vec<f64>> {
    Ok(top_k_indices(v, k)?.restrict(v))
}

/// Elementwise product `u ⊗ w`.
pub fn hadamard(u: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    check_len("hadamard", u.len(), w.len())?;
    Ok(u.iter().zip(w).map(|(a, b)| a * b).collect())
}

pub fn nnz(v: &[f64]) -> usize {
    v.iter().filter(|x| **x != 0.0).count()
}
