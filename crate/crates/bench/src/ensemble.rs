use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use otk_core::linalg::norm2;
use otk_core::{DenseMatrix, OtkError, ProblemInstance, Result};

/// Name of the generator behind every instance; written into CSV headers.
pub const GENERATOR_NAME: &str = "ChaCha8Rng";

/// One point of the Gaussian ensemble: `m = ⌈κn⌉`, `k = max(1, round(ρm))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub n: usize,
    pub kappa: f64,
    pub rho: f64,
    pub noise_eps: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(n: usize, kappa: f64, rho: f64, noise_eps: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            n,
            kappa,
            rho,
            noise_eps,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(OtkError::Argument("n must be >= 1".into()));
        }
        if !(self.kappa > 0.0 && self.kappa <= 1.0) {
            return Err(OtkError::Argument(format!(
                "kappa must be in (0, 1], got {}",
                self.kappa
            )));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(OtkError::Argument(format!("rho must be in (0, 1], got {}", self.rho)));
        }
        if !(self.noise_eps >= 0.0 && self.noise_eps.is_finite()) {
            return Err(OtkError::Argument(format!(
                "noise level must be >= 0, got {}",
                self.noise_eps
            )));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        // the slack keeps products like 0.7 * 100 from rounding up past the integer
        ((self.kappa * self.n as f64 - 1e-9).ceil() as usize).max(1)
    }

    pub fn k(&self) -> usize {
        ((self.rho * self.m() as f64).round() as usize).clamp(1, self.m())
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Draws `A` (standard normal, unit columns), a `k`-sparse truth with a
/// uniformly random support and standard normal nonzeros, and, when
/// `noise_eps > 0`, noise `ε h` with `||h|| = 1`. Entirely determined by `spec.seed`.
pub fn generate_instance(spec: &EnsembleSpec) -> Result<ProblemInstance> {
    spec.validate()?;
    let (m, n, k) = (spec.m(), spec.n, spec.k());
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut a = DenseMatrix::from_fn(m, n, |_, _| normal(&mut rng))?;
    a.normalize_columns();

    let mut support = sample(&mut rng, n, k).into_vec();
    support.sort_unstable();
    let mut truth = vec![0.0; n];
    for &j in &support {
        truth[j] = normal(&mut rng);
    }

    let clean = a.matvec(&truth);
    if spec.noise_eps > 0.0 {
        let mut h: Vec<f64> = (0..m).map(|_| normal(&mut rng)).collect();
        let scale = spec.noise_eps / norm2(&h);
        h.iter_mut().for_each(|v| *v *= scale);
        let y = clean.iter().zip(&h).map(|(c, e)| c + e).collect();
        ProblemInstance::new(a, y, k)?.with_truth(truth)?.with_noise(h)
    } else {
        ProblemInstance::new(a, clean, k)?.with_truth(truth)
    }
}
