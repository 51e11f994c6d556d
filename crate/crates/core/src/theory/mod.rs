//! Computable side of the convergence analysis: exact RICs for small
//! matrices, the root constants, the bound constants of each variant and the
//! admissible `(α, β)` windows.

mod bounds;
mod convergence;
mod ric;

pub use bounds::{
    envelope_rate, g_omega, gamma_sharp_omega, gamma_star, gamma_star_omega, geometric_envelope, l2_bound_g, s_of_k,
    xi_q,
};
pub use convergence::{
    hbot_constants, hbrot_constants, parameter_window, HbotConstants, HbrotConstants, ParameterWindow,
};
pub use ric::{ric_exact, RicProfile, RIC_MAX_SUPPORTS};

use crate::error::{OtkError, Result};
use crate::sparse::top_k_indices;

/// Splits `w` restricted to `lambda` into consecutive blocks of its `k`
/// largest-magnitude remaining entries and returns each block's max-norm.
pub fn greedy_block_maxima(w: &[f64], lambda: &[usize], k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(OtkError::Argument("block size k must be >= 1".into()));
    }
    if let Some(&j) = lambda.iter().find(|&&j| j >= w.len()) {
        return Err(OtkError::Argument(format!(
            "index {j} out of range for length {}",
            w.len()
        )));
    }
    let mut rest: Vec<usize> = lambda.to_vec();
    rest.sort_unstable();
    rest.dedup();
    let mut maxima = Vec::with_capacity(rest.len().div_ceil(k));
    while !rest.is_empty() {
        let vals: Vec<f64> = rest.iter().map(|&j| w[j]).collect();
        let take = k.min(rest.len());
        let picked = top_k_indices(&vals, take)?;
        maxima.push(picked.indices().iter().map(|&i| vals[i].abs()).fold(0.0, f64::max));
        let keep: Vec<usize> = (0..rest.len()).filter(|&i| !picked.contains(i)).collect();
        rest = keep.into_iter().map(|i| rest[i]).collect();
    }
    Ok(maxima)
}
