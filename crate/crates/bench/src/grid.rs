use rayon::prelude::*;

use otk_core::{Algorithm, AlgorithmConfig, OtkError, Result};

use crate::ensemble::EnsembleSpec;
use crate::transition::{transition_point, Transition};
use crate::trial::{run_trial, TrialRecord};

/// A full success-rate experiment over a `(κ, ρ)` grid.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub n: usize,
    pub kappas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub trials: usize,
    /// Each algorithm with the configuration it runs under.
    pub runs: Vec<(Algorithm, AlgorithmConfig)>,
    pub noise_eps: f64,
    pub base_seed: u64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.kappas.is_empty() || self.rhos.is_empty() || self.runs.is_empty() {
            return Err(OtkError::Argument(
                "grid needs at least one kappa, rho and algorithm".into(),
            ));
        }
        if self.trials == 0 {
            return Err(OtkError::Argument("trials per cell must be >= 1".into()));
        }
        for &kappa in &self.kappas {
            for &rho in &self.rhos {
                EnsembleSpec::new(self.n, kappa, rho, self.noise_eps, 0)?;
            }
        }
        for (_, cfg) in &self.runs {
            cfg.validate()?;
        }
        Ok(())
    }
}

/// Values `start, start + step, ...` up to `stop` inclusive, rounded to ten
/// decimals so that accumulated error never reaches the CSV.
pub fn grid_values(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start <= stop && start.is_finite() && stop.is_finite()) {
        return Err(OtkError::Argument(format!(
            "invalid range {start}..={stop} with step {step}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10)
        .collect())
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial, a hash of the base seed, the algorithm name and the
/// cell and trial indices.
pub fn trial_seed(base: u64, algorithm: Algorithm, kappa_index: usize, rho_index: usize, trial: usize) -> u64 {
    // FNV-1a over the name keeps the seed independent of enum order
    let name = algorithm.name().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    });
    [name, kappa_index as u64, rho_index as u64, trial as u64]
        .into_iter()
        .fold(splitmix64(base), |h, part| splitmix64(h ^ part))
}

/// Successes over trials in one `(algorithm, κ, ρ)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellRate {
    pub algorithm: Algorithm,
    pub kappa: f64,
    pub rho: f64,
    pub successes: usize,
    pub trials: usize,
}

impl CellRate {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionRow {
    pub algorithm: Algorithm,
    pub kappa: f64,
    pub transition: Transition,
}

#[derive(Debug, Clone)]
pub struct GridResult {
    pub spec: GridSpec,
    /// Ordered by run, κ index, ρ index, trial index.
    pub records: Vec<TrialRecord>,
}

impl GridResult {
    /// One entry per cell, in record order.
    pub fn cells(&self) -> Vec<CellRate> {
        self.records
            .chunks(self.spec.trials)
            .map(|chunk| CellRate {
                algorithm: chunk[0].algorithm,
                kappa: chunk[0].spec.kappa,
                rho: chunk[0].spec.rho,
                successes: chunk.iter().filter(|r| r.success).count(),
                trials: chunk.len(),
            })
            .collect()
    }

    /// The 50% transition in ρ for every run and κ.
    pub fn transitions(&self) -> Result<Vec<TransitionRow>> {
        let cells = self.cells();
        cells
            .chunks(self.spec.rhos.len())
            .map(|row| {
                let points: Vec<(f64, f64)> = row.iter().map(|c| (c.rho, c.rate())).collect();
                Ok(TransitionRow {
                    algorithm: row[0].algorithm,
                    kappa: row[0].kappa,
                    transition: transition_point(&points)?,
                })
            })
            .collect()
    }
}

/// Runs every trial of the grid. Trials run on the current rayon pool; the
/// output order and contents do not depend on the pool size. Under noise the
/// residual tolerance of every run is raised to at least `noise_eps`.
pub fn success_grid(spec: &GridSpec) -> Result<GridResult> {
    spec.validate()?;
    let runs: Vec<(Algorithm, AlgorithmConfig)> = spec
        .runs
        .iter()
        .map(|(alg, cfg)| {
            let mut cfg = cfg.clone();
            cfg.residual_tol = cfg.residual_tol.max(spec.noise_eps);
            (*alg, cfg)
        })
        .collect();
    let mut tasks = Vec::new();
    for (run, (algorithm, _)) in spec.runs.iter().enumerate() {
        for (ki, &kappa) in spec.kappas.iter().enumerate() {
            for (ri, &rho) in spec.rhos.iter().enumerate() {
                for t in 0..spec.trials {
                    let seed = trial_seed(spec.base_seed, *algorithm, ki, ri, t);
                    tasks.push((run, EnsembleSpec::new(spec.n, kappa, rho, spec.noise_eps, seed)?));
                }
            }
        }
    }
    let records = tasks
        .par_iter()
        .map(|(run, ens)| {
            let (algorithm, cfg) = &runs[*run];
            run_trial(ens, *algorithm, cfg)
        })
        .collect();
    Ok(GridResult {
        spec: spec.clone(),
        records,
    })
}
