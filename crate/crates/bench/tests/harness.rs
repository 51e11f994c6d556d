use otk_bench::csv::{write_results, write_transitions, RESULTS_COLUMNS};
use otk_bench::*;
use otk_core::linalg::norm2;
use otk_core::{Algorithm, AlgorithmConfig};

fn logistic_points(mid: f64) -> Vec<(f64, f64)> {
    (1..=40)
        .map(|i| {
            let rho = i as f64 * 0.0125;
            (rho, 1.0 / (1.0 + ((rho - mid) / 0.02).exp()))
        })
        .collect()
}

#[test]
fn columns_are_unit_and_instances_reproducible() {
    let spec = EnsembleSpec::new(64, 0.5, 0.2, 0.0, 99).unwrap();
    let p = generate_instance(&spec).unwrap();
    for n in p.a().column_norms() {
        assert!((n - 1.0).abs() < 1e-12);
    }
    assert_eq!((p.m(), p.k()), (32, 6));
    let truth = p.truth().unwrap();
    assert_eq!(truth.iter().filter(|v| **v != 0.0).count(), 6);
    assert_eq!(p.y(), p.a().matvec(truth).as_slice());

    let q = generate_instance(&spec).unwrap();
    assert_eq!(p.a().as_slice(), q.a().as_slice());
    assert_eq!(p.y(), q.y());
    assert_eq!(p.truth(), q.truth());
}

#[test]
fn noise_has_requested_norm_and_shares_the_clean_draw() {
    let clean = generate_instance(&EnsembleSpec::new(50, 0.6, 0.1, 0.0, 4).unwrap()).unwrap();
    let noisy = generate_instance(&EnsembleSpec::new(50, 0.6, 0.1, 5e-3, 4).unwrap()).unwrap();
    assert!((norm2(noisy.noise().unwrap()) - 5e-3).abs() < 1e-15);
    assert_eq!(clean.a().as_slice(), noisy.a().as_slice());
    assert_eq!(clean.truth(), noisy.truth());
}

#[test]
fn spec_dimensions() {
    let s = EnsembleSpec::new(100, 0.7, 0.01, 0.0, 0).unwrap();
    assert_eq!((s.m(), s.k()), (70, 1));
    let s = EnsembleSpec::new(256, 0.5, 0.15, 0.0, 0).unwrap();
    assert_eq!((s.m(), s.k()), (128, 19));
    assert!(EnsembleSpec::new(10, 0.0, 0.1, 0.0, 0).is_err());
    assert!(EnsembleSpec::new(10, 0.5, 1.5, 0.0, 0).is_err());
}

#[test]
fn square_systems_always_recover() {
    // binary thresholding is not scale-invariant, so HBOT/HBOTP run inside
    // their admissible window instead of at alpha = 5
    let binary = AlgorithmConfig::default().with_params(1.0, 0.0);
    for alg in Algorithm::ALL {
        let cfg = match alg {
            Algorithm::Hbot | Algorithm::Hbotp => binary.clone(),
            _ => AlgorithmConfig::default(),
        };
        for seed in 0..3 {
            let spec = EnsembleSpec::new(16, 1.0, 0.1, 0.0, seed).unwrap();
            let rec = run_trial(&spec, alg, &cfg);
            assert!(rec.success, "{alg} seed {seed}: {:e}", rec.rel_error);
            assert!(rec.error.is_none());
        }
    }
}

#[test]
fn guard_errors_become_failed_trials() {
    let spec = EnsembleSpec::new(64, 0.5, 0.1, 0.0, 1).unwrap();
    let rec = run_trial(&spec, Algorithm::Hbot, &AlgorithmConfig::default());
    assert!(!rec.success);
    assert!(rec.error.unwrap().contains("guard") || rec.rel_error.is_nan());
}

#[test]
fn paper_operating_point_recovers() {
    let cfg = AlgorithmConfig::default();
    let wins = (0..10)
        .filter(|&t| {
            let seed = trial_seed(2024, Algorithm::Hbrotp, 0, 0, t);
            run_trial(
                &EnsembleSpec::new(256, 0.5, 0.1, 0.0, seed).unwrap(),
                Algorithm::Hbrotp,
                &cfg,
            )
            .success
        })
        .count();
    assert!(wins >= 9, "{wins}/10");
}

#[test]
fn transition_recovers_logistic_midpoint() {
    for mid in [0.2, 0.3, 0.37] {
        let t = transition_point(&logistic_points(mid)).unwrap();
        assert!(!t.extrapolated);
        assert!((t.rho - mid).abs() < 0.02, "{mid}: {}", t.rho);
    }
}

fn small_grid(seed: u64) -> GridSpec {
    GridSpec {
        n: 40,
        kappas: vec![0.5, 1.0],
        rhos: grid_values(0.1, 0.5, 0.2).unwrap(),
        trials: 4,
        runs: vec![
            (Algorithm::Hbrotp, AlgorithmConfig::default()),
            (Algorithm::Htp, AlgorithmConfig::default()),
        ],
        noise_eps: 0.0,
        base_seed: seed,
    }
}

#[test]
fn grid_is_deterministic_and_well_formed() {
    let spec = small_grid(31);
    let first = success_grid(&spec).unwrap();
    let second = success_grid(&spec).unwrap();
    let render = |r: &GridResult| {
        let mut buf = Vec::new();
        write_results(&mut buf, r, false).unwrap();
        write_transitions(&mut buf, &r.transitions().unwrap()).unwrap();
        String::from_utf8(buf).unwrap()
    };
    let text = render(&first);
    assert_eq!(text, render(&second));
    assert!(text.starts_with("# generator=ChaCha8Rng, base_seed=31, n=40\n"));
    assert_eq!(text.lines().nth(1).unwrap(), RESULTS_COLUMNS);
    assert_eq!(first.records.len(), 2 * 2 * 3 * 4);
    for cell in first.cells() {
        assert!((0.0..=1.0).contains(&cell.rate()));
    }
    assert_ne!(text, render(&success_grid(&small_grid(32)).unwrap()));
}

#[test]
fn full_sampling_row_succeeds() {
    let spec = GridSpec {
        n: 30,
        kappas: vec![1.0],
        rhos: vec![0.05, 0.1],
        trials: 5,
        runs: vec![(Algorithm::Hbrotp, AlgorithmConfig::default())],
        noise_eps: 0.0,
        base_seed: 5,
    };
    let result = success_grid(&spec).unwrap();
    assert!(result.cells().iter().all(|c| c.rate() == 1.0));
}

#[test]
fn success_rate_falls_with_sparsity() {
    let spec = GridSpec {
        n: 64,
        kappas: vec![0.5],
        rhos: vec![0.1, 0.3, 0.5, 0.7],
        trials: 20,
        runs: vec![(Algorithm::Htp, AlgorithmConfig::default())],
        noise_eps: 0.0,
        base_seed: 77,
    };
    let rates: Vec<f64> = success_grid(&spec).unwrap().cells().iter().map(|c| c.rate()).collect();
    for w in rates.windows(2) {
        assert!(w[1] <= w[0] + 0.15, "{rates:?}");
    }
}

#[test]
fn empty_grids_are_rejected() {
    let mut spec = small_grid(1);
    spec.rhos.clear();
    assert!(success_grid(&spec).is_err());
    let mut spec = small_grid(1);
    spec.trials = 0;
    assert!(success_grid(&spec).is_err());
}
