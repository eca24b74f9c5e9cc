//! Property and sampled-invariant checks for the model, set and solver
//! modules.

use proptest::prelude::*;

use qopt::linalg;
use qopt::model::{
    collapse_to_q0, holder_l, make_absolute_noise_oracle, make_holder_oracle,
    make_relative_noise_oracle, make_shifted_point_oracle, Degree, InexactOracle, Perturbation,
};
use qopt::rng::Xoshiro256pp;
use qopt::sets::{prox_linear, EuclideanBall, FeasibleSet};
use qopt::{run_adaptive_fgm, run_adaptive_gm, DeltaSchedule, GmConfig};

fn quad_f(x: &[f64]) -> f64 {
    0.5 * linalg::norm_sq(x)
}

fn quad_grad(x: &[f64]) -> Vec<f64> {
    x.to_vec()
}

proptest! {
    // Young collapse: δ·r^q ≤ (qρ/2)·r² + δ̂ for every r.
    #[test]
    fn young_collapse_dominates(
        delta in 0.0_f64..10.0,
        q in 0.0_f64..1.99,
        rho in 0.01_f64..100.0,
        r in 0.0_f64..10.0,
    ) {
        let deg = Degree::new(q).unwrap();
        let (inc, delta_hat) = collapse_to_q0(delta, deg, rho).unwrap();
        prop_assert!(delta * r.powf(q) <= 0.5 * inc * r * r + delta_hat + 1e-9);
    }

    // Certified Hölder constant dominates the Hölder upper model.
    #[test]
    fn certified_holder_dominates(
        nu in 0.0_f64..=1.0,
        qfrac in 0.0_f64..0.99,
        delta in 0.001_f64..10.0,
        l_nu in 0.1_f64..10.0,
        r in 1e-6_f64..100.0,
    ) {
        let q = qfrac * (1.0 + nu);
        let l = holder_l(delta, nu, q, l_nu, true).unwrap();
        let lhs = l_nu / (1.0 + nu) * r.powf(1.0 + nu);
        let rhs = 0.5 * l * r * r + delta * r.powf(q);
        prop_assert!(lhs <= rhs * (1.0 + 1e-10) + 1e-12);
    }

    // Ball projection: idempotent, nonexpansive, and feasible.
    #[test]
    fn ball_projection_properties(
        x in prop::collection::vec(-5.0_f64..5.0, 3),
        y in prop::collection::vec(-5.0_f64..5.0, 3),
        radius in 0.1_f64..3.0,
    ) {
        let ball = EuclideanBall::new(vec![0.0; 3], radius).unwrap();
        let px = ball.project(&x);
        prop_assert!(ball.contains(&px));
        let ppx = ball.project(&px);
        prop_assert!(linalg::dist(&px, &ppx) <= 1e-12);
        let py = ball.project(&y);
        prop_assert!(linalg::dist(&px, &py) <= linalg::dist(&x, &y) + 1e-12);
    }

    // Prox of a linear model is invariant to rescaling (g, w) → (cg, cw).
    #[test]
    fn prox_rescaling_invariance(
        g in prop::collection::vec(-3.0_f64..3.0, 2),
        anchor in prop::collection::vec(-0.9_f64..0.9, 2),
        weight in 0.1_f64..10.0,
        c in 0.1_f64..50.0,
    ) {
        let ball = EuclideanBall::unit(2);
        let a = prox_linear(&g, &anchor, weight, &ball).unwrap();
        let scaled: Vec<f64> = g.iter().map(|v| c * v).collect();
        let b = prox_linear(&scaled, &anchor, c * weight, &ball).unwrap();
        prop_assert!(linalg::dist(&a, &b) <= 1e-12);
    }

    // Largest quadratic root: positive and solves the equation.
    #[test]
    fn alpha_root_solves_equation(l in 0.01_f64..100.0, a in 0.0_f64..1000.0) {
        let alpha = qopt::solve_alpha(l, a).unwrap();
        prop_assert!(alpha > 0.0);
        let residual = l * alpha * alpha - alpha - a;
        prop_assert!(residual.abs() <= 1e-9 * (1.0 + l * alpha * alpha));
    }
}

/// Samples the one-sided model inequality
/// `f(x) − f_center − ψ(x) ≤ (L/2)‖x−y‖² + δ‖x−y‖^q`
/// at `per_center` points for each of `centers` centers in the unit ball,
/// and the two-sided lower bound when the oracle claims it.
fn check_model_inequality(oracle: &InexactOracle, dim: usize, centers: usize, per_center: usize) {
    let mut rng = Xoshiro256pp::seed_from_u64(4242);
    let ball = EuclideanBall::unit(dim);
    let q = oracle.degree.value();
    for _ in 0..centers {
        let y: Vec<f64> = ball.project(
            &(0..dim)
                .map(|_| 2.0 * rng.next_f64() - 1.0)
                .collect::<Vec<_>>(),
        );
        let eval = oracle.evaluate(&y);
        assert_eq!(eval.psi(&y), 0.0, "psi at the center must vanish");
        assert!(eval.delta_at_center >= 0.0);
        for _ in 0..per_center {
            let x: Vec<f64> = ball.project(
                &(0..dim)
                    .map(|_| 2.0 * rng.next_f64() - 1.0)
                    .collect::<Vec<_>>(),
            );
            let middle = oracle.exact_f(&x).unwrap() - eval.f_center - eval.psi(&x);
            let r = linalg::dist(&x, &y);
            let upper = 0.5 * oracle.l_valid * r * r + eval.delta_at_center * r.powf(q);
            assert!(
                middle <= upper + 1e-9,
                "upper model inequality violated: middle={middle} upper={upper}"
            );
            if oracle.lower_bound_holds {
                assert!(middle >= -1e-9, "lower model inequality violated");
            }
        }
    }
}

#[test]
fn relative_noise_model_inequality_sampled() {
    // The worked example: f(x) = ½‖x‖², α = 0.1, certified (L, q) = (1, 1).
    let oracle =
        make_relative_noise_oracle(quad_grad, quad_f, 1.0, 0.1, Perturbation::new(77)).unwrap();
    check_model_inequality(&oracle, 2, 32, 32);
}

#[test]
fn absolute_noise_model_inequality_sampled() {
    let oracle =
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.2, Perturbation::new(78)).unwrap();
    check_model_inequality(&oracle, 2, 32, 32);
}

#[test]
fn shifted_point_model_inequality_sampled() {
    let oracle =
        make_shifted_point_oracle(quad_grad, quad_f, 1.0, 0.1, Perturbation::new(79)).unwrap();
    check_model_inequality(&oracle, 2, 32, 32);
}

#[test]
fn holder_oracle_model_inequality_sampled() {
    // f(x) = ‖x‖ has ν = 0 subgradients with variation at most 2.
    let f = |x: &[f64]| linalg::norm(x);
    let sg = |x: &[f64]| {
        let n = linalg::norm(x);
        if n == 0.0 {
            vec![0.0; x.len()]
        } else {
            linalg::scale(x, 1.0 / n)
        }
    };
    let q = Degree::new(0.5).unwrap();
    let oracle = make_holder_oracle(sg, f, 2.0, 0.0, 0.1, q).unwrap();
    assert!(oracle.lower_bound_holds);
    check_model_inequality(&oracle, 3, 32, 32);
}

#[test]
fn psi_midpoint_convexity_sampled() {
    // ψ convex in its argument: midpoint test on seeded triples.
    let oracle =
        make_relative_noise_oracle(quad_grad, quad_f, 1.0, 0.3, Perturbation::new(5)).unwrap();
    let mut rng = Xoshiro256pp::seed_from_u64(6);
    for _ in 0..100 {
        let y: Vec<f64> = (0..3).map(|_| rng.next_f64() - 0.5).collect();
        let eval = oracle.evaluate(&y);
        let a: Vec<f64> = (0..3).map(|_| rng.next_f64() - 0.5).collect();
        let b: Vec<f64> = (0..3).map(|_| rng.next_f64() - 0.5).collect();
        let mid = linalg::weighted_mean(&a, 1.0, &b, 1.0);
        assert!(eval.psi(&mid) <= 0.5 * eval.psi(&a) + 0.5 * eval.psi(&b) + 1e-12);
    }
}

#[test]
fn prox_linear_first_order_optimality_sampled() {
    let ball = EuclideanBall::unit(3);
    let mut rng = Xoshiro256pp::seed_from_u64(17);
    for _ in 0..50 {
        let g: Vec<f64> = (0..3).map(|_| 4.0 * rng.next_f64() - 2.0).collect();
        let anchor = ball.project(
            &(0..3)
                .map(|_| 2.0 * rng.next_f64() - 1.0)
                .collect::<Vec<_>>(),
        );
        let weight = 0.2 + 5.0 * rng.next_f64();
        let sol = prox_linear(&g, &anchor, weight, &ball).unwrap();
        for _ in 0..20 {
            let x = ball.project(
                &(0..3)
                    .map(|_| 2.0 * rng.next_f64() - 1.0)
                    .collect::<Vec<_>>(),
            );
            let grad_at_sol = linalg::axpy(&g, weight, &linalg::sub(&sol, &anchor));
            assert!(linalg::dot(&grad_at_sol, &linalg::sub(&x, &sol)) >= -1e-9);
        }
    }
}

#[test]
fn problems_holder_certificate_sampled() {
    // Both benchmark objectives admit the ν = 0 model with L_0 = 2: the
    // exact-subgradient model with certified L(δ) satisfies the two-sided
    // inequality on sampled pairs.
    let q = Degree::new(0.5).unwrap();
    for problem in [
        qopt::Problem::BestApprox(qopt::generate_best_approx(4, 11).unwrap()),
        qopt::Problem::Fts(qopt::generate_fts(4, 6, 12).unwrap()),
    ] {
        let oracle = problem.holder_oracle(0.3, q).unwrap();
        check_model_inequality(&oracle, 4, 24, 24);
    }
}

#[test]
fn fgm_iterates_stay_feasible() {
    let ball = EuclideanBall::unit(3);
    let oracle =
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.05, Perturbation::new(100)).unwrap();
    let config = GmConfig::new(0.5, 80).unwrap();
    let run = run_adaptive_fgm(
        &oracle,
        &ball,
        &[0.4, 0.4, 0.4],
        &DeltaSchedule::FromOracle,
        &config,
    )
    .unwrap();
    for it in &run.iterates {
        assert!(ball.contains(it));
    }
    assert!(ball.contains(&run.output_point));
}

#[test]
fn line_search_exhaustion_flags_lying_oracle() {
    // An oracle whose f-values rise on every call can never satisfy the
    // acceptance inequality: the search must give up at the cap.
    use std::cell::Cell;
    let counter = Cell::new(0.0_f64);
    let q1 = Degree::new(1.0).unwrap();
    let oracle = qopt::model::make_general_oracle(
        move |y: &[f64]| {
            counter.set(counter.get() + 1.0);
            qopt::ModelEvaluation::linear(y.to_vec(), counter.get(), vec![0.0; y.len()], 0.0, q1)
        },
        q1,
        qopt::DeltaRule::Constant(0.0),
        false,
        1.0,
        None,
    );
    let ball = EuclideanBall::unit(2);
    let config = GmConfig::new(1.0, 3).unwrap();
    assert!(matches!(
        run_adaptive_gm(&oracle, &ball, &[0.1, 0.1], &config),
        Err(qopt::CoreError::LineSearchExhausted { .. })
    ));
}

#[test]
fn gm_runs_with_a_general_model() {
    // The full quadratic model ψ(x, y) = f(x) − f(y) is a valid two-sided
    // model with δ = 0 for any L; its prox has a radial closed form.
    let q1 = Degree::new(1.0).unwrap();
    let oracle = qopt::model::make_general_oracle(
        move |y: &[f64]| {
            let fy = quad_f(y);
            let center = y.to_vec();
            qopt::ModelEvaluation {
                center: center.clone(),
                f_center: fy,
                delta_at_center: 0.0,
                degree: q1,
                form: qopt::model::ModelForm::General {
                    psi: Box::new(move |x: &[f64]| quad_f(x) - fy),
                    prox: Box::new(move |anchor: &[f64], weight: f64, set: &dyn FeasibleSet| {
                        // argmin ½‖x‖² + (w/2)‖x − a‖² = w·a/(1 + w).
                        Ok(set.project(&linalg::scale(anchor, weight / (1.0 + weight))))
                    }),
                },
            }
        },
        q1,
        qopt::DeltaRule::Constant(0.0),
        true,
        1.0,
        Some(Box::new(|x: &[f64]| quad_f(x))),
    );
    let ball = EuclideanBall::unit(2);
    let config = GmConfig::new(1.0, 30).unwrap();
    let run = run_adaptive_gm(&oracle, &ball, &[0.8, -0.4], &config).unwrap();
    assert!(quad_f(run.iterates.last().unwrap()) < 1e-6);
    assert!(ball.contains(&run.output_point));
}

#[test]
fn vi_model_diagonal_and_convexity() {
    let q1 = Degree::new(1.0).unwrap();
    let model = qopt::ViModel::operator(|x: &[f64]| linalg::scale(x, 2.0), 0.0, q1).unwrap();
    let mut rng = Xoshiro256pp::seed_from_u64(21);
    for _ in 0..50 {
        let x: Vec<f64> = (0..3).map(|_| rng.next_f64() - 0.5).collect();
        assert_eq!(model.psi(&x, &x), 0.0);
        // Convexity in the first argument (linear here): midpoint identity.
        let a: Vec<f64> = (0..3).map(|_| rng.next_f64() - 0.5).collect();
        let b: Vec<f64> = (0..3).map(|_| rng.next_f64() - 0.5).collect();
        let mid = linalg::weighted_mean(&a, 1.0, &b, 1.0);
        assert!(model.psi(&mid, &x) <= 0.5 * model.psi(&a, &x) + 0.5 * model.psi(&b, &x) + 1e-12);
    }
}

#[test]
fn mirror_prox_rejects_infeasible_start() {
    let q1 = Degree::new(1.0).unwrap();
    let model = qopt::ViModel::operator(|x: &[f64]| x.to_vec(), 0.0, q1).unwrap();
    let ball = EuclideanBall::unit(2);
    assert!(matches!(
        qopt::run_mirror_prox(&model, &ball, &[2.0, 0.0], 1e-3, 1.0, 10),
        Err(qopt::CoreError::InfeasibleStart)
    ));
}

#[test]
fn restart_warns_when_delta_exceeds_admissible_level() {
    let ball = EuclideanBall::unit(2);
    let oracle =
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 1.0, Perturbation::new(50)).unwrap();
    let q1 = Degree::new(1.0).unwrap();
    let run =
        qopt::run_restarted_fgm(&oracle, &ball, &[1.0, 0.0], 1.0, 1.0, 1e-6, 1.0, q1).unwrap();
    assert!(!run.warnings.is_empty());
}

#[test]
fn noisy_runs_are_seed_deterministic() {
    let ball = EuclideanBall::unit(3);
    let make = || {
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.1, Perturbation::new(2024)).unwrap()
    };
    let config = GmConfig::new(1.0, 50).unwrap();
    let a = run_adaptive_gm(&make(), &ball, &[0.5, 0.5, 0.0], &config).unwrap();
    let b = run_adaptive_gm(&make(), &ball, &[0.5, 0.5, 0.0], &config).unwrap();
    assert_eq!(a.iterates, b.iterates);
    assert_eq!(a.l_history, b.l_history);
    assert_eq!(a.f_hat_history, b.f_hat_history);
}
