use crate::error::{OtkError, Result};

fn mass_at(v: &[f64], lambda: f64) -> f64 {
    v.iter().map(|x| (x - lambda).clamp(0.0, 1.0)).sum()
}

/// Euclidean projection of `v` onto the capped simplex
/// `{w : sum(w) = k, 0 <= w <= 1}`.
///
/// The projection is `clip(v - lambda, 0, 1)` for the scalar `lambda` at which
/// the clipped mass equals `k`. The mass is a piecewise linear, nonincreasing
/// function of `lambda` with breakpoints at `v_i` and `v_i - 1`; we sweep the
/// sorted breakpoints from above and solve the linear piece that brackets `k`.
pub fn project_capped_simplex(v: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = v.len();
    if k == 0 || k > n {
        return Err(OtkError::Argument(format!(
            "capped simplex mass k={k} must satisfy 1 <= k <= {n}"
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(OtkError::Argument("projection input has non-finite entries".into()));
    }
    if k == n {
        return Ok(vec![1.0; n]);
    }
    let target = k as f64;

    // (breakpoint, index, enters_partial)
    let mut events: Vec<(f64, usize, bool)> = Vec::with_capacity(2 * n);
    for (i, &x) in v.iter().enumerate() {
        events.push((x, i, true));
        events.push((x - 1.0, i, false));
    }
    events.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));

    let (mut n_full, mut n_part, mut s_part) = (0.0f64, 0.0f64, 0.0f64);
    let mut lambda = None;
    let mut e = 0;
    while e < events.len() {
        let b = events[e].0;
        let mass_b = n_full + s_part - n_part * b;
        if mass_b >= target {
            lambda = Some(if n_part > 0.0 {
                (n_full + s_part - target) / n_part
            } else {
                b
            });
            break;
        }
        while e < events.len() && events[e].0 == b {
            let (_, i, enters) = events[e];
            if enters {
                n_part += 1.0;
                s_part += v[i];
            } else {
                n_part -= 1.0;
                s_part -= v[i];
                n_full += 1.0;
            }
            e += 1;
        }
    }
    let mut lambda = lambda.unwrap_or_else(|| events.last().map_or(0.0, |ev| ev.0));

    // Cancellation in the running sums can leave a small mass defect when
    // many breakpoints coincide; bisection restores it.
    if (mass_at(v, lambda) - target).abs() > 1e-10 * target.max(1.0) {
        lambda = bisect_lambda(v, target);
    }
    Ok(v.iter().map(|x| (x - lambda).clamp(0.0, 1.0)).collect())
}

fn bisect_lambda(v: &[f64], target: f64) -> f64 {
    let lo0 = v.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let hi0 = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass_at(v, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}
