//! Small matrices whose RICs are low enough for the convergence windows to
//! be certified by exact enumeration, and a check of real runs against the
//! resulting error envelopes.
//!
//! Gaussian matrices at desk scale have RICs far above the thresholds. Two
//! families stay below them:
//!
//! * `(n−1) x n` matrices with orthonormal rows whose null vector is nearly
//!   flat. Then `AᵀA = I − qqᵀ` and `δ_t ≈ t/n`, so `k = 1` works for
//!   `n` from 12 to 14.
//! * square orthogonal matrices with a small Gaussian perturbation, which
//!   leaves every `δ_t` small and nonzero (`k = 2` works at `n = 10`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use otk_core::linalg::{dist2, dot, norm2};
use otk_core::theory::{hbot_constants, hbrot_constants, parameter_window, RicProfile};
use otk_core::{Algorithm, AlgorithmConfig, DenseMatrix, OtkError, ProblemInstance, Result, Variant};

fn gaussian(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Extends `basis` (orthonormal vectors of length `n`) to `n` vectors by
/// Gram-Schmidt on Gaussian draws.
fn complete_basis(rng: &mut ChaCha8Rng, mut basis: Vec<Vec<f64>>, n: usize) -> Vec<Vec<f64>> {
    while basis.len() < n {
        let mut v = gaussian(rng, n);
        // two passes keep the basis orthogonal to machine precision
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = norm2(&v);
        if nv > 1e-8 {
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    basis
}

/// `(n−1) x n`, unit columns, null vector `q` with `|q_i| ∝ 1 + jitter·g_i`.
pub fn flat_null_matrix(n: usize, jitter: f64, seed: u64) -> Result<DenseMatrix> {
    if n < 2 {
        return Err(OtkError::Argument(format!("need n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n)
        .map(|_| {
            let g: f64 = rng.sample(StandardNormal);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            sign * (1.0 + jitter * g)
        })
        .collect();
    let nq = norm2(&q);
    q.iter_mut().for_each(|v| *v /= nq);
    let rows = complete_basis(&mut rng, vec![q], n);
    let data: Vec<f64> = rows.into_iter().skip(1).flatten().collect();
    let mut a = DenseMatrix::new(n - 1, n, data)?;
    a.normalize_columns();
    Ok(a)
}

/// `n x n` orthogonal matrix plus `eps`-scaled Gaussian noise, unit columns.
pub fn perturbed_orthogonal(n: usize, eps: f64, seed: u64) -> Result<DenseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = complete_basis(&mut rng, Vec::new(), n);
    let data: Vec<f64> = rows
        .into_iter()
        .flatten()
        .map(|v| v + eps * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut a = DenseMatrix::new(n, n, data)?;
    a.normalize_columns();
    Ok(a)
}

/// Outcome of comparing one run with its theoretical envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeCheck {
    pub ric: RicProfile,
    pub alpha: f64,
    pub beta: f64,
    /// `max_p (‖x_S − x^p‖ − slack) / envelope(p)` over `p = 1..=max_iter`.
    pub worst_ratio: f64,
    /// The same maximum over `p >= 2`; at `p = 1` the bound is met with
    /// equality when `β = 0` and there is no noise.
    pub worst_ratio_after_start: f64,
    pub iterations: usize,
    pub final_error: f64,
}

impl EnvelopeCheck {
    pub fn holds(&self) -> bool {
        self.worst_ratio <= 1.0
    }
}

/// Runs HBOTP or HBROTP (ω = 1) on a `k`-sparse signal drawn from `seed`
/// with noise of norm `eps`, at `β = beta_frac · β_max` and `α = 1 + β`
/// shifted by `alpha_shift` of the way to the interval end. Every iterate
/// up to `p = 50` is compared with the envelope from the exact RIC profile;
/// a run that stops early is held at its last iterate. Errors below
/// `1e-12 ‖x*‖` count as zero (round-off floor).
pub fn check_envelope(
    a: DenseMatrix,
    k: usize,
    variant: Variant,
    beta_frac: f64,
    alpha_shift: f64,
    eps: f64,
    seed: u64,
) -> Result<EnvelopeCheck> {
    let algorithm = match variant {
        Variant::Hbotp => Algorithm::Hbotp,
        Variant::Hbrotp => Algorithm::Hbrotp,
        other => {
            return Err(OtkError::Argument(format!(
                "envelope check covers hbotp and hbrotp, not {other}"
            )))
        }
    };
    let (m, n) = (a.rows(), a.cols());
    let ric = RicProfile::exact(&a, k)?;
    let window = parameter_window(&ric, 1, variant, n)?;
    let beta = beta_frac * window.beta_max;
    let (lo, hi) = window
        .alpha_interval(beta)
        .ok_or_else(|| OtkError::Argument(format!("beta fraction {beta_frac} is outside [0, 1)")))?;
    let centre = 1.0 + beta;
    let alpha = if alpha_shift >= 0.0 {
        centre + alpha_shift * (hi - centre)
    } else {
        centre + alpha_shift * (centre - lo.max(0.0))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut truth = vec![0.0; n];
    for j in rand::seq::index::sample(&mut rng, n, k) {
        let v: f64 = rng.sample(StandardNormal);
        truth[j] = v.signum() * (0.5 + v.abs());
    }
    let raw = gaussian(&mut rng, m);
    let scale = if eps > 0.0 { eps / norm2(&raw) } else { 0.0 };
    let noise: Vec<f64> = raw.iter().map(|v| v * scale).collect();
    let y: Vec<f64> = a.matvec(&truth).iter().zip(&noise).map(|(u, v)| u + v).collect();
    let problem = ProblemInstance::new(a, y, k)?.with_truth(truth.clone())?;

    let cfg = AlgorithmConfig {
        residual_tol: 0.0,
        ..AlgorithmConfig::new(variant).with_params(alpha, beta)
    };
    let run = algorithm.run(&problem, &cfg)?;
    let e0 = norm2(&truth);
    let nu = norm2(&noise);
    let envelope: Box<dyn Fn(usize) -> f64> = match variant {
        Variant::Hbotp => {
            let c = hbot_constants(&ric, alpha, beta)?;
            Box::new(move |p| c.envelope(p, e0, e0, nu))
        }
        _ => {
            let c = hbrot_constants(&ric, alpha, beta, 1, n, variant)?;
            Box::new(move |p| c.envelope(p, e0, e0, nu))
        }
    };
    let last = run.x_final.clone();
    let ratios: Vec<f64> = (1..=cfg.max_iter)
        .map(|p| {
            let x = run.trace.iterates.get(p - 1).unwrap_or(&last);
            (dist2(x, &truth) - 1e-12 * e0).max(0.0) / envelope(p)
        })
        .collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    let worst_after = ratios.iter().skip(1).copied().fold(0.0, f64::max);
    Ok(EnvelopeCheck {
        ric,
        alpha,
        beta,
        worst_ratio: worst,
        worst_ratio_after_start: worst_after,
        iterations: run.iterations,
        final_error: dist2(&last, &truth),
    })
}
