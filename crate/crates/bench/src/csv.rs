use std::io::{self, Write};

use crate::ensemble::GENERATOR_NAME;
use crate::grid::{GridResult, TransitionRow};

pub const RESULTS_COLUMNS: &str = "algorithm,kappa,rho,m,k,trial,seed,success,iters,rel_error,wall_time_s";
pub const TRANSITION_COLUMNS: &str = "algorithm,kappa,rho_50";

/// Writes the per-trial CSV. Wall times are written as `NA` unless `timing`
/// is set, so that reruns with the same seed produce identical bytes.
pub fn write_results<W: Write>(mut out: W, result: &GridResult, timing: bool) -> io::Result<()> {
    let spec = &result.spec;
    writeln!(
        out,
        "# generator={GENERATOR_NAME}, base_seed={}, n={}",
        spec.base_seed, spec.n
    )?;
    writeln!(out, "{RESULTS_COLUMNS}")?;
    for (i, r) in result.records.iter().enumerate() {
        let trial = i % spec.trials;
        let rel = if r.rel_error.is_nan() {
            "NA".to_string()
        } else {
            format!("{:e}", r.rel_error)
        };
        let wall = if timing {
            format!("{:e}", r.wall_time)
        } else {
            "NA".to_string()
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.spec.kappa,
            r.spec.rho,
            r.spec.m(),
            r.spec.k(),
            trial,
            r.spec.seed,
            r.success as u8,
            r.iterations,
            rel,
            wall
        )?;
    }
    Ok(())
}

/// Writes the transition CSV. A row whose curve never crossed 0.5 carries the
/// grid boundary; the extrapolation flag is not part of the format.
pub fn write_transitions<W: Write>(mut out: W, rows: &[TransitionRow]) -> io::Result<()> {
    writeln!(out, "{TRANSITION_COLUMNS}")?;
    for row in rows {
        writeln!(out, "{},{},{}", row.algorithm, row.kappa, row.transition.rho)?;
    }
    Ok(())
}
