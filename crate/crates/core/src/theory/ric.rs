use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{OtkError, Result};
use crate::linalg::DenseMatrix;
use crate::subproblems::binomial;

/// Most supports [`ric_exact`] will enumerate.
pub const RIC_MAX_SUPPORTS: u128 = 1_000_000;

/// Exact restricted isometry constant of the given order by enumerating every
/// support `T` with `|T| = order` and taking the worst spectral deviation of
/// `A_T^T A_T` from the identity.
pub fn ric_exact(a: &DenseMatrix, order: usize) -> Result<f64> {
    let n = a.cols();
    if order == 0 || order > n {
        return Err(OtkError::Argument(format!(
            "RIC order {order} must satisfy 1 <= order <= {n}"
        )));
    }
    let required = binomial(n as u64, order as u64);
    if required > RIC_MAX_SUPPORTS {
        return Err(OtkError::Guard {
            what: "exact RIC support enumeration",
            required,
            limit: RIC_MAX_SUPPORTS,
        });
    }

    let all: Vec<usize> = (0..n).collect();
    let gram = a.gram_block(&all);
    let mut support: Vec<usize> = (0..order).collect();
    let mut block = DMatrix::<f64>::zeros(order, order);
    let mut worst = 0.0f64;
    loop {
        for (p, &i) in support.iter().enumerate() {
            for (q, &j) in support.iter().enumerate() {
                block[(p, q)] = gram[i * n + j];
            }
        }
        let (lo, hi) = if order == 1 {
            (block[(0, 0)], block[(0, 0)])
        } else {
            let eig = SymmetricEigen::new(block.clone()).eigenvalues;
            (eig.min(), eig.max())
        };
        worst = worst.max(hi - 1.0).max(1.0 - lo);

        // next combination in lexicographic order
        let mut i = order;
        while i > 0 && support[i - 1] == n - order + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        support[i - 1] += 1;
        for j in i..order {
            support[j] = support[j - 1] + 1;
        }
    }
    Ok(worst.max(0.0))
}

/// The RIC values the convergence bounds consume, for a base sparsity `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicProfile {
    pub k: usize,
    pub delta_k: f64,
    pub delta_kp1: f64,
    pub delta_2k: f64,
    pub delta_3k: f64,
    /// `true` when computed by enumeration, `false` when supplied by the caller.
    pub exact: bool,
}

impl RicProfile {
    /// Caller-supplied constants; must be finite, nonnegative and ordered
    /// `delta_k <= delta_{k+1} <= delta_2k <= delta_3k`.
    pub fn assumed(k: usize, delta_k: f64, delta_kp1: f64, delta_2k: f64, delta_3k: f64) -> Result<Self> {
        let profile = Self {
            k,
            delta_k,
            delta_kp1,
            delta_2k,
            delta_3k,
            exact: false,
        };
        profile.validate()?;
        Ok(profile)
    }

    /// Zero RIC at every order (an orthonormal system).
    pub fn zero(k: usize) -> Self {
        Self {
            k,
            delta_k: 0.0,
            delta_kp1: 0.0,
            delta_2k: 0.0,
            delta_3k: 0.0,
            exact: false,
        }
    }

    /// Computes δ_k, δ_{k+1}, δ_2k and δ_3k of `a` by enumeration.
    pub fn exact(a: &DenseMatrix, k: usize) -> Result<Self> {
        if k == 0 || 3 * k > a.cols() {
            return Err(OtkError::Argument(format!(
                "exact profile needs 1 <= 3k <= n, got k={k}, n={}",
                a.cols()
            )));
        }
        let profile = Self {
            k,
            delta_k: ric_exact(a, k)?,
            delta_kp1: ric_exact(a, k + 1)?,
            delta_2k: ric_exact(a, 2 * k)?,
            delta_3k: ric_exact(a, 3 * k)?,
            exact: true,
        };
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(OtkError::Argument("k must be >= 1".into()));
        }
        let ds = [self.delta_k, self.delta_kp1, self.delta_2k, self.delta_3k];
        if ds.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(OtkError::Argument(format!(
                "RIC values must be finite and >= 0: {ds:?}"
            )));
        }
        if !ds.windows(2).all(|w| w[0] <= w[1]) {
            return Err(OtkError::Argument(format!(
                "RIC values must be ordered delta_k <= delta_k+1 <= delta_2k <= delta_3k: {ds:?}"
            )));
        }
        Ok(())
    }

    /// `δ_{k+s(k)}`: δ_{k+1} for odd `k`, δ_k for even `k`.
    pub fn delta_ksk(&self) -> f64 {
        if super::s_of_k(self.k) == 1 {
            self.delta_kp1
        } else {
            self.delta_k
        }
    }
}
