use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use otk_core::{Algorithm, Variant};

#[derive(Debug, Parser)]
#[command(
    name = "otk",
    version,
    about = "Heavy-ball optimal k-thresholding solvers, theory checks and experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a seeded Gaussian instance and write A, y and the true signal
    Gen(GenArgs),
    /// Recover a sparse vector from A and y
    Recover(RecoverArgs),
    /// Success rates over a (kappa, rho) grid
    Grid(GridArgs),
    /// Success rates plus the 50% transition curve
    Ptc(PtcArgs),
    /// Convergence constants and (alpha, beta) window for given RICs
    Bounds(BoundsArgs),
    /// Exact restricted isometry constants of a small matrix
    Ric(RicArgs),
    /// Run the built-in oracle checks
    Selftest,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.1)]
    pub rho: f64,
    /// Noise norm ||nu||_2
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, env = "OTK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "instance")]
    pub out_prefix: String,
}

/// Iteration parameters shared by `recover`, `grid` and `ptc`.
#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 5.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
    #[arg(long, default_value_t = 1)]
    pub omega: usize,
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    /// Residual tolerance ||y - Ax||_2 for stopping
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[arg(long = "A", visible_alias = "a")]
    pub a: PathBuf,
    #[arg(long)]
    pub y: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value = "hbrotp")]
    pub algo: Algorithm,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// True signal, for the relative error report
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value = "x.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub kappa_min: f64,
    #[arg(long, default_value_t = 0.5)]
    pub kappa_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub kappa_step: f64,
    /// First rho value; defaults to the step
    #[arg(long)]
    pub rho_min: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub rho_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub rho_step: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "hbrotp")]
    pub algos: Vec<Algorithm>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, env = "OTK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "grid.csv")]
    pub out: PathBuf,
    /// Record wall times in the CSV (makes reruns differ)
    #[arg(long)]
    pub timing: bool,
    /// Worker threads; defaults to the available parallelism
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PtcArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Transition CSV; defaults to the results path with `.transitions.csv`
    #[arg(long)]
    pub transitions_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 0.0)]
    pub delta_k: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta_kp1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta_2k: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta_3k: f64,
    #[arg(long, default_value_t = 5.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
    #[arg(long, default_value_t = 1)]
    pub omega: usize,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value = "hbrotp")]
    pub variant: Variant,
}

#[derive(Debug, Args)]
pub struct RicArgs {
    #[arg(long = "A", visible_alias = "a")]
    pub a: PathBuf,
    /// Orders t for which delta_t is computed
    #[arg(long, value_delimiter = ',', required = true)]
    pub order: Vec<usize>,
}
