mod common;

use common::*;
use proptest::prelude::*;

use otk_core::algorithms::{heavy_ball_step, run_htp, HeavyBallState};
use otk_core::linalg::{dist2, norm2, residual_norm};
use otk_core::sparse::{hard_threshold, nnz};
use otk_core::subproblems::solve_relaxed_ot;
use otk_core::{Algorithm, AlgorithmConfig, DenseMatrix, ProblemInstance, QpSolverConfig, StopReason, Variant};

fn instance(seed: u64, m: usize, n: usize, k: usize) -> (ProblemInstance, Vec<f64>) {
    let mut r = rng(seed);
    let a = gaussian_matrix(&mut r, m, n);
    let truth = sparse_vec(&mut r, n, k);
    let y = a.matvec(&truth);
    let p = ProblemInstance::new(a, y, k)
        .unwrap()
        .with_truth(truth.clone())
        .unwrap();
    (p, truth)
}

/// Plain ROTP written out directly: gradient step, one relaxed compression,
/// hard thresholding, least squares on the kept support.
fn rotp_oracle(a: &DenseMatrix, y: &[f64], k: usize, iters: usize) -> Vec<(Vec<usize>, Vec<f64>)> {
    let n = a.cols();
    let mut x = vec![0.0; n];
    let mut out = Vec::new();
    for _ in 0..iters {
        let mut u = x.clone();
        for j in 0..n {
            let mut g = 0.0;
            for i in 0..a.rows() {
                let mut ax = 0.0;
                for l in 0..n {
                    ax += a.get(i, l) * x[l];
                }
                g += a.get(i, j) * (y[i] - ax);
            }
            u[j] += g;
        }
        let w = solve_relaxed_ot(a, y, &u, k, &QpSolverConfig::default()).unwrap().w;
        let compressed: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a * b).collect();
        let support = top_k_oracle(&compressed, k);
        x = lsq_oracle(a, y, &support);
        out.push((support, x.clone()));
        if naive_residual_norm(a, &x, y) <= 1e-10 {
            break;
        }
    }
    out
}

#[test]
fn hbrotp_with_unit_step_and_no_momentum_is_rotp() {
    for seed in 0..20 {
        let (p, _) = instance(1000 + seed, 32, 64, 5);
        let cfg = AlgorithmConfig::new(Variant::Hbrotp).with_params(1.0, 0.0);
        let run = Algorithm::Hbrotp.run(&p, &cfg).unwrap();
        let oracle = rotp_oracle(p.a(), p.y(), 5, run.iterations);
        assert_eq!(oracle.len(), run.iterations, "seed {seed}");
        for (step, (support, x)) in oracle.iter().enumerate() {
            assert_eq!(
                run.trace.supports[step + 1].indices(),
                support.as_slice(),
                "seed {seed} step {step}"
            );
            assert!(
                dist2(&run.trace.iterates[step + 1], x) <= 1e-12,
                "seed {seed} step {step}"
            );
        }
        let rotp = Algorithm::Rotp.run(&p, &AlgorithmConfig::default()).unwrap();
        assert_eq!(rotp.x_final, run.x_final);
    }
}

#[test]
fn noiseless_truth_is_a_fixed_point() {
    for seed in 0..5 {
        let (p, truth) = instance(2000 + seed, 12, 20, 3);
        let state = HeavyBallState::new(truth.clone(), truth.clone());
        for variant in [Variant::Hbotp, Variant::Hbrotp] {
            let cfg = AlgorithmConfig::new(variant);
            let out = heavy_ball_step(&p, &cfg, &state).unwrap();
            assert!(
                dist2(&out.next, &truth) < 1e-10 * norm2(&truth),
                "{variant} seed {seed}"
            );
        }
    }
}

#[test]
fn pursuit_refit_never_increases_residual() {
    for seed in 0..6 {
        let (p, _) = instance(3000 + seed, 12, 24, 3);
        for variant in [Variant::Hbotp, Variant::Hbrotp] {
            let cfg = AlgorithmConfig::new(variant);
            let mut state = HeavyBallState::new(vec![0.0; 24], vec![0.0; 24]);
            for _ in 0..15 {
                let out = heavy_ball_step(&p, &cfg, &state).unwrap();
                let before = residual_norm(p.a(), &out.thresholded, p.y()).unwrap();
                let after = residual_norm(p.a(), &out.next, p.y()).unwrap();
                assert!(after <= before + 1e-12, "{variant} seed {seed}");
                state = HeavyBallState {
                    x_prev: state.x_curr,
                    x_curr: out.next,
                    p: state.p + 1,
                };
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_iterate_is_k_sparse(seed in 0u64..100_000, alg_index in 0usize..8) {
        let alg = Algorithm::ALL[alg_index];
        let k = 1 + seed as usize % 4;
        let (p, _) = instance(seed, 10, 18, k);
        let cfg = AlgorithmConfig { max_iter: 12, ..AlgorithmConfig::default() };
        let run = alg.run(&p, &cfg).unwrap();
        prop_assert_eq!(run.trace.len(), run.iterations + 1);
        prop_assert_eq!(run.trace.last().unwrap(), run.x_final.as_slice());
        for (x, res) in run.trace.iterates.iter().zip(&run.trace.residual_norms) {
            prop_assert!(nnz(x) <= k);
            let naive = naive_residual_norm(p.a(), x, p.y());
            prop_assert!((naive - res).abs() <= 1e-12 * naive.max(1.0));
        }
    }
}

#[test]
fn hbotp_converges_geometrically_on_small_instances() {
    let mut solved = 0;
    for seed in 0..10 {
        let (p, truth) = instance(4000 + seed, 10, 16, 2);
        let cfg = AlgorithmConfig::new(Variant::Hbotp).with_params(1.0, 0.0);
        let run = Algorithm::Hbotp.run(&p, &cfg).unwrap();
        let rel = dist2(&run.x_final, &truth) / norm2(&truth);
        if rel < 1e-6 {
            solved += 1;
        }
        let errs = run.trace.errors_to_truth.as_ref().unwrap();
        assert_eq!(errs.len(), run.trace.len());
    }
    assert!(solved >= 9, "{solved}/10");

    // plain heavy-ball thresholding (no re-fit) decays geometrically rather than in one step
    let (p, truth) = instance(4100, 10, 16, 2);
    let run = Algorithm::Hbot
        .run(&p, &AlgorithmConfig::new(Variant::Hbot).with_params(1.0, 0.0))
        .unwrap();
    let errs = run.trace.errors_to_truth.unwrap();
    assert!(errs.last().unwrap() / norm2(&truth) < 1e-6);
    let tail: Vec<f64> = errs.iter().skip(3).copied().filter(|e| *e > 1e-13).collect();
    let ratios: Vec<f64> = tail.windows(2).map(|w| w[1] / w[0]).collect();
    assert!(!ratios.is_empty() && ratios.iter().all(|r| *r < 1.0), "{ratios:?}");
}

#[test]
fn htp_matches_two_line_recursion() {
    for seed in 0..5 {
        let (p, truth) = instance(5000 + seed, 64, 128, 5);
        let run = run_htp(&p, &AlgorithmConfig::default()).unwrap();
        assert!(dist2(&run.x_final, &truth) < 1e-10 * norm2(&truth));

        let (a, y) = (p.a(), p.y());
        let mut x = vec![0.0; 128];
        for step in 1..=run.iterations {
            let r: Vec<f64> = (0..64)
                .map(|i| y[i] - (0..128).map(|j| a.get(i, j) * x[j]).sum::<f64>())
                .collect();
            let u: Vec<f64> = (0..128)
                .map(|j| x[j] + (0..64).map(|i| a.get(i, j) * r[i]).sum::<f64>())
                .collect();
            x = lsq_oracle(a, y, &top_k_oracle(&u, 5));
            assert!(dist2(&x, &run.trace.iterates[step]) < 1e-10, "seed {seed} step {step}");
        }
    }
}

#[test]
fn iht_step_is_thresholded_gradient_step() {
    let (p, _) = instance(6000, 20, 40, 3);
    let cfg = AlgorithmConfig {
        max_iter: 1,
        ..AlgorithmConfig::default()
    };
    let run = Algorithm::Iht.run(&p, &cfg).unwrap();
    let want = hard_threshold(&p.a().t_matvec(p.y()), 3).unwrap();
    assert!(dist2(&run.x_final, &want) < 1e-14);
}

#[test]
fn failed_inner_solves_are_counted_not_fatal() {
    let (p, _) = instance(7000, 20, 50, 4);
    let cfg = AlgorithmConfig {
        max_iter: 5,
        qp: QpSolverConfig {
            max_inner_iter: 1,
            ..QpSolverConfig::default()
        },
        ..AlgorithmConfig::default()
    };
    let run = Algorithm::Hbrotp.run(&p, &cfg).unwrap();
    assert!(run.inner_flags.qp_nonconverged > 0);
    assert!(run.iterations >= 1);
}

#[test]
fn stagnation_stops_early() {
    // a hopeless instance: k far beyond what m supports, so HTP settles on a wrong support
    let (p, _) = instance(8000, 10, 60, 8);
    let run = run_htp(&p, &AlgorithmConfig::default()).unwrap();
    if run.stop_reason == StopReason::Stagnation {
        assert!(run.iterations < 50);
        let n = run.trace.len();
        assert!(dist2(&run.trace.iterates[n - 1], &run.trace.iterates[n - 2]) <= 1e-13);
    } else {
        assert_ne!(run.stop_reason, StopReason::ResidualTol);
    }
}

#[test]
fn omega_two_compresses_twice() {
    let (p, truth) = instance(9000, 32, 64, 4);
    let cfg = AlgorithmConfig {
        omega: 2,
        ..AlgorithmConfig::default()
    };
    let run = Algorithm::Hbrotp.run(&p, &cfg).unwrap();
    assert!(dist2(&run.x_final, &truth) < 1e-8 * norm2(&truth));
}
