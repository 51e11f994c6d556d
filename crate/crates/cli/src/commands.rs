use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use otk_bench::csv::{write_results, write_transitions};
use otk_bench::{generate_instance, grid_values, success_grid, EnsembleSpec, GridResult, GridSpec, GENERATOR_NAME};
use otk_core::io::{read_matrix, read_vector, write_matrix, write_vector};
use otk_core::linalg::{dist2, norm2};
use otk_core::theory::{
    gamma_sharp_omega, gamma_star, gamma_star_omega, parameter_window, ric_exact, HbotConstants, HbrotConstants,
    RicProfile,
};
use otk_core::{AlgorithmConfig, OtkError, ProblemInstance};

use crate::args::{BoundsArgs, GenArgs, GridArgs, PtcArgs, RecoverArgs, RicArgs, SolverArgs};
use crate::CliError;

/// Prints the resolved configuration block that opens every run.
fn print_config(command: &str, entries: &[(&str, String)]) {
    println!("# otk {command}");
    for (key, value) in entries {
        println!("#   {key} = {value}");
    }
}

fn io_error(path: &Path, err: std::io::Error) -> CliError {
    OtkError::Io {
        path: path.to_path_buf(),
        source: err,
    }
    .into()
}

fn solver_config(s: &SolverArgs) -> AlgorithmConfig {
    AlgorithmConfig {
        alpha: s.alpha,
        beta: s.beta,
        omega: s.omega,
        max_iter: s.max_iter,
        residual_tol: s.tol,
        ..AlgorithmConfig::default()
    }
}

fn solver_entries(s: &SolverArgs) -> Vec<(&'static str, String)> {
    vec![
        ("alpha", s.alpha.to_string()),
        ("beta", s.beta.to_string()),
        ("omega", s.omega.to_string()),
        ("max_iter", s.max_iter.to_string()),
        ("tol", format!("{:e}", s.tol)),
        ("x0 = x1", "0".into()),
    ]
}

pub fn gen(args: &GenArgs) -> Result<(), CliError> {
    print_config(
        "gen",
        &[
            ("n", args.n.to_string()),
            ("kappa", args.kappa.to_string()),
            ("rho", args.rho.to_string()),
            ("eps", args.eps.to_string()),
            ("seed", args.seed.to_string()),
            ("generator", GENERATOR_NAME.into()),
            ("out_prefix", args.out_prefix.clone()),
        ],
    );
    let spec = EnsembleSpec::new(args.n, args.kappa, args.rho, args.eps, args.seed)?;
    let problem = generate_instance(&spec)?;
    let path = |suffix: &str| PathBuf::from(format!("{}.{suffix}.csv", args.out_prefix));
    write_matrix(path("A"), problem.a())?;
    write_vector(path("y"), problem.y())?;
    write_vector(
        path("truth"),
        problem.truth().expect("generated instances carry the truth"),
    )?;
    println!("m = {}, k = {}", spec.m(), spec.k());
    println!(
        "wrote {}, {}, {}",
        path("A").display(),
        path("y").display(),
        path("truth").display()
    );
    Ok(())
}

pub fn recover(args: &RecoverArgs) -> Result<(), CliError> {
    let mut entries = vec![
        ("A", args.a.display().to_string()),
        ("y", args.y.display().to_string()),
        ("k", args.k.to_string()),
        ("algo", args.algo.to_string()),
    ];
    entries.extend(solver_entries(&args.solver));
    entries.push((
        "truth",
        args.truth.as_ref().map_or("-".into(), |p| p.display().to_string()),
    ));
    entries.push(("out", args.out.display().to_string()));
    print_config("recover", &entries);

    let a = read_matrix(&args.a)?;
    let y = read_vector(&args.y)?;
    let truth = args.truth.as_ref().map(read_vector).transpose()?;
    let mut problem = ProblemInstance::new(a, y, args.k)?;
    if let Some(t) = &truth {
        problem = problem.with_truth(t.clone())?;
    }
    let run = args.algo.run(&problem, &solver_config(&args.solver))?;
    println!("iterations = {}", run.iterations);
    println!("stop_reason = {}", run.stop_reason);
    println!(
        "residual = {:e}",
        run.trace.residual_norms.last().copied().unwrap_or(f64::NAN)
    );
    println!(
        "support = {:?}",
        run.trace
            .supports
            .last()
            .map(|s| s.indices().to_vec())
            .unwrap_or_default()
    );
    if run.inner_flags.qp_nonconverged + run.inner_flags.rank_deficient > 0 {
        println!(
            "inner_flags = qp_nonconverged:{} rank_deficient:{}",
            run.inner_flags.qp_nonconverged, run.inner_flags.rank_deficient
        );
    }
    if let Some(t) = &truth {
        let scale = norm2(t);
        let err = dist2(&run.x_final, t);
        println!("rel_error = {:e}", if scale > 0.0 { err / scale } else { err });
    }
    write_vector(&args.out, &run.x_final)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn grid_spec(args: &GridArgs) -> Result<GridSpec, CliError> {
    let kappas = grid_values(args.kappa_min, args.kappa_max, args.kappa_step)?;
    let rhos = grid_values(args.rho_min.unwrap_or(args.rho_step), args.rho_max, args.rho_step)?;
    let cfg = solver_config(&args.solver);
    Ok(GridSpec {
        n: args.n,
        kappas,
        rhos,
        trials: args.trials,
        runs: args.algos.iter().map(|a| (*a, cfg.clone())).collect(),
        noise_eps: args.eps,
        base_seed: args.seed,
    })
}

fn run_grid(command: &str, args: &GridArgs, extra: &[(&str, String)]) -> Result<GridResult, CliError> {
    let spec = grid_spec(args)?;
    let fmt_list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    let mut entries = vec![
        ("n", args.n.to_string()),
        ("kappas", fmt_list(&spec.kappas)),
        ("rhos", fmt_list(&spec.rhos)),
        ("trials", args.trials.to_string()),
        (
            "algos",
            args.algos.iter().map(|a| a.name()).collect::<Vec<_>>().join(","),
        ),
    ];
    entries.extend(solver_entries(&args.solver));
    entries.extend([
        ("eps", args.eps.to_string()),
        ("seed", args.seed.to_string()),
        ("generator", GENERATOR_NAME.into()),
        ("out", args.out.display().to_string()),
        ("timing", args.timing.to_string()),
        ("threads", args.threads.map_or("auto".into(), |t| t.to_string())),
    ]);
    entries.extend(extra.iter().cloned());
    print_config(command, &entries);

    if let Some(t) = args.threads {
        if t == 0 {
            return Err(OtkError::Argument("--threads must be >= 1".into()).into());
        }
        // a second call in the same process is harmless; the pool stays as built
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let result = success_grid(&spec)?;
    let file = File::create(&args.out).map_err(|e| io_error(&args.out, e))?;
    let mut out = BufWriter::new(file);
    write_results(&mut out, &result, args.timing)
        .and_then(|_| out.flush())
        .map_err(|e| io_error(&args.out, e))?;
    for cell in result.cells() {
        println!(
            "{} kappa={} rho={} success={}/{}",
            cell.algorithm, cell.kappa, cell.rho, cell.successes, cell.trials
        );
    }
    println!("wrote {}", args.out.display());
    Ok(result)
}

pub fn grid(args: &GridArgs) -> Result<(), CliError> {
    run_grid("grid", args, &[]).map(|_| ())
}

fn transitions_path(args: &PtcArgs) -> PathBuf {
    args.transitions_out.clone().unwrap_or_else(|| {
        let out = &args.grid.out;
        let stem = out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "grid".into());
        out.with_file_name(format!("{stem}.transitions.csv"))
    })
}

pub fn ptc(args: &PtcArgs) -> Result<(), CliError> {
    let path = transitions_path(args);
    let result = run_grid("ptc", &args.grid, &[("transitions_out", path.display().to_string())])?;
    let rows = result.transitions()?;
    let file = File::create(&path).map_err(|e| io_error(&path, e))?;
    let mut out = BufWriter::new(file);
    write_transitions(&mut out, &rows)
        .and_then(|_| out.flush())
        .map_err(|e| io_error(&path, e))?;
    for row in &rows {
        let flag = if row.transition.extrapolated {
            " (grid boundary)"
        } else {
            ""
        };
        println!(
            "{} kappa={} rho_50={}{flag}",
            row.algorithm, row.kappa, row.transition.rho
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn bounds(args: &BoundsArgs) -> Result<(), CliError> {
    print_config(
        "bounds",
        &[
            ("variant", args.variant.to_string()),
            ("k", args.k.to_string()),
            ("n", args.n.to_string()),
            ("delta_k", args.delta_k.to_string()),
            ("delta_kp1", args.delta_kp1.to_string()),
            ("delta_2k", args.delta_2k.to_string()),
            ("delta_3k", args.delta_3k.to_string()),
            ("alpha", args.alpha.to_string()),
            ("beta", args.beta.to_string()),
            ("omega", args.omega.to_string()),
        ],
    );
    let ric = RicProfile::assumed(args.k, args.delta_k, args.delta_kp1, args.delta_2k, args.delta_3k)?;
    println!("gamma* = {:.6}", gamma_star());
    println!("gamma*(omega) = {:.6}", gamma_star_omega(args.omega)?);
    println!("gamma#(omega) = {:.6}", gamma_sharp_omega(args.omega)?);

    if args.variant.is_relaxed() {
        match HbrotConstants::evaluate(&ric, args.alpha, args.beta, args.omega, args.n, args.variant) {
            Ok(c) => {
                println!("sigma = {}", c.sigma);
                println!("xi_sigma = {:.6}", c.xi_sigma);
                println!("t_k = {:.6}", c.t_k);
                println!("z_k = {:.6}", c.z_k);
                println!("d0 = {:.6}", c.d0);
                println!("d1 = {:.6}", c.d1);
                println!("d2 = {:.6}", c.d2);
                println!("c1_sigma = {:.6}", c.c1_sigma);
                println!("c_sigma = {:.6}", c.c_sigma);
                println!("b1 = {:.6}", c.b1);
                println!("b2 = {:.6}", c.b2);
                println!("b3 = {:.6}", c.b3);
                println!("theta = {:.6}", c.theta);
            }
            Err(e) => println!("constants unavailable: {e}"),
        }
    } else {
        match HbotConstants::evaluate(&ric, args.alpha, args.beta) {
            Ok(c) => {
                println!("eta = {:.6}", c.eta);
                println!("b = {:.6}", c.b);
                println!("theta = {:.6}", c.theta);
                println!("c2 = {:.6}", c.c2);
            }
            Err(e) => println!("constants unavailable: {e}"),
        }
    }

    let window = parameter_window(&ric, args.omega, args.variant, args.n);
    let verdict = window.and_then(|w| {
        println!("beta_max = {:.6}", w.beta_max);
        if let Some((lo, hi)) = w.alpha_interval(args.beta) {
            println!("alpha interval at beta = ({lo:.6}, {hi:.6})");
        }
        if w.contains(args.alpha, args.beta) {
            Ok(())
        } else {
            Err(OtkError::Window(format!(
                "(alpha, beta) = ({}, {}) is outside the {} window",
                args.alpha, args.beta, args.variant
            )))
        }
    });
    // the window check alone decides the verdict; θ < 1 does not imply it for the relaxed variants
    match verdict {
        Ok(()) => {
            println!("window = pass");
            Ok(())
        }
        Err(e) => {
            println!("window = fail");
            Err(e.into())
        }
    }
}

pub fn ric(args: &RicArgs) -> Result<(), CliError> {
    print_config(
        "ric",
        &[
            ("A", args.a.display().to_string()),
            (
                "order",
                args.order.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
            ),
        ],
    );
    let a = read_matrix(&args.a)?;
    for &t in &args.order {
        println!("delta_{t} = {:.12}", ric_exact(&a, t)?);
    }
    Ok(())
}
