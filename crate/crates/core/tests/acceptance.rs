//! Acceptance suite: one test per release criterion, each asserting the
//! stated tolerance and printing a PASS line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use qopt::linalg;
use qopt::model::{
    holder_l, make_absolute_noise_oracle, make_holder_oracle, Degree, InexactOracle, Perturbation,
};
use qopt::problems::FminProvenance;
use qopt::rng::Xoshiro256pp;
use qopt::sets::{prox_linear, EuclideanBall, FeasibleSet};
use qopt::strong::StrongOracle;
use qopt::subgrad::StepRule;
use qopt::trace::Termination;
use qopt::vi::SaddleProblem;
use qopt::{
    collapse_to_q0, fgm_bound, generate_best_approx, generate_fts, gm_bound, reference_fmin,
    run_adaptive_fgm, run_adaptive_gm, run_mirror_prox, run_projected_subgradient,
    run_restarted_fgm, run_strong_gm, saddle_to_vi, strong_bound, universal_complexity_bound,
    vi_bound, DeltaSchedule, GmConfig, Problem,
};

fn quad_f(x: &[f64]) -> f64 {
    0.5 * linalg::norm_sq(x)
}

fn quad_grad(x: &[f64]) -> Vec<f64> {
    x.to_vec()
}

fn q(v: f64) -> Degree {
    Degree::new(v).expect("valid degree")
}

/// Unit quadratic test setup: f(x) = ½‖x‖² on the unit ball of ℝ⁵,
/// x₀ = e₁, so f_* = 0, x_* = 0 and ½‖x₀ − x_*‖² = 0.5.
fn quad_setup() -> (EuclideanBall, Vec<f64>, f64) {
    let ball = EuclideanBall::unit(5);
    let mut x0 = vec![0.0; 5];
    x0[0] = 1.0;
    let r = 0.5_f64.sqrt();
    (ball, x0, r)
}

#[test]
fn criterion_01_gm_bound_envelope() {
    let (ball, x0, r) = quad_setup();
    for &noise in &[0.0, 0.1] {
        let oracle =
            make_absolute_noise_oracle(quad_grad, quad_f, 1.0, noise, Perturbation::new(1))
                .unwrap();
        let config = GmConfig::new(1.0, 1000).unwrap();
        let run = run_adaptive_gm(&oracle, &ball, &x0, &config).unwrap();
        assert_eq!(run.iterations(), 1000);
        for n in 1..=1000usize {
            let bound = gm_bound(n, 1.0, r, noise, q(1.0)).unwrap();
            let gap = run.f_hat_history[n - 1];
            assert!(
                gap <= bound + 1e-9,
                "GM envelope violated at N={n}, noise={noise}: gap={gap:.3e} bound={bound:.3e}"
            );
        }
    }
    println!("acceptance 1 (adaptive gradient method gap-bound envelope): PASS");
}

#[test]
fn criterion_02_fgm_bound_envelope() {
    let (ball, x0, r) = quad_setup();
    // δ = 0: exact oracle.
    let mut cases: Vec<(InexactOracle, f64, f64)> = vec![(
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.0, Perturbation::new(2)).unwrap(),
        0.0,
        1.0,
    )];
    // δ = 0.01 with q ∈ {0.5, 1, 1.5}: the Hölder model of the smooth
    // quadratic (ν = 1) is certified for any q < 2 with L_valid = L₁ = 1.
    for &qv in &[0.5, 1.0, 1.5] {
        cases.push((
            make_holder_oracle(quad_grad, quad_f, 1.0, 1.0, 0.01, q(qv)).unwrap(),
            0.01,
            qv,
        ));
    }
    for (oracle, delta, qv) in &cases {
        let config = GmConfig::new(1.0, 500).unwrap();
        let run =
            run_adaptive_fgm(oracle, &ball, &x0, &DeltaSchedule::FromOracle, &config).unwrap();
        for n in 1..=500usize {
            let bound = fgm_bound(n, 1.0, r, *delta, q(*qv)).unwrap();
            let gap = run.f_hat_history[n - 1];
            assert!(
                gap <= bound + 1e-9,
                "FGM envelope violated at N={n}, delta={delta}, q={qv}: gap={gap:.3e} bound={bound:.3e}"
            );
        }
    }
    // No-accumulation threshold, checked symbolically on the formula
    // (L = 0 isolates the δ-term): nonincreasing in N iff q ≥ 2/3.
    let delta_term = |n: usize, qv: f64| fgm_bound(n, 0.0, r, 0.01, q(qv)).unwrap();
    for n in 1..100usize {
        assert!(delta_term(n + 1, 0.5) > delta_term(n, 0.5));
        assert!((delta_term(n + 1, 2.0 / 3.0) - delta_term(n, 2.0 / 3.0)).abs() < 1e-15);
        assert!(delta_term(n + 1, 0.8) < delta_term(n, 0.8));
    }
    println!("acceptance 2 (FGM bound envelope + no-accumulation threshold): PASS");
}

#[test]
fn criterion_03_restart_guarantee() {
    let ball = EuclideanBall::unit(2);
    let oracle =
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.0, Perturbation::new(3)).unwrap();
    let eps = 1e-4;
    let run = run_restarted_fgm(&oracle, &ball, &[1.0, 0.0], 1.0, 1.0, eps, 1.0, q(1.0)).unwrap();
    // p = ⌈log₂(1/ε) + 1⌉ = 15 restarts of N = ⌈4√(L/μ)⌉ = 4 iterations.
    assert_eq!(run.iterations(), 15 * 4);
    let dist_sq = linalg::norm_sq(&run.output_point);
    assert!(
        dist_sq <= eps,
        "restart guarantee violated: ‖x − x_*‖² = {dist_sq:.3e} > {eps}"
    );
    println!("acceptance 3 (restart scheme reaches ‖x − x_*‖² ≤ 1e−4 in 15×4 iterations): PASS");
}

#[test]
fn criterion_04_strong_oracle_linear_rate() {
    let ball = EuclideanBall::new(vec![0.0, 0.0], 2.0_f64.sqrt()).unwrap();
    let x0 = [1.0, 1.0];
    let r0_sq = 2.0; // x_* = 0
    let diag = vec![0.1, 1.0];

    // δ = 0: pure exponential envelope (L·r₀²/2)·e^{−kμ/L} = e^{−0.1k}.
    let exact = StrongOracle::exact_diagonal_quadratic(diag.clone(), q(1.0)).unwrap();
    let run = run_strong_gm(&exact, &ball, &x0, 200).unwrap();
    for k in 1..=200usize {
        let bound = 0.5 * 1.0 * r0_sq * (-(k as f64) * 0.1).exp();
        let gap = run.f_hat_history[k - 1];
        assert!(
            gap <= bound + 1e-9,
            "strong-oracle exact envelope violated at k={k}: {gap:.3e} > {bound:.3e}"
        );
    }

    // Exponential-rate consequence at ε = 1e−6: the gap is below ε from
    // k = ⌈(L/μ)·ln(L·r₀²/(2ε))⌉ on.
    let k_eps = (10.0 * (r0_sq / (2.0 * 1e-6)).ln()).ceil() as usize;
    assert!(k_eps <= 200);
    assert!(run.f_hat_history[k_eps - 1] <= 1e-6 + 1e-9);

    // δ = 0.05, q = 1: the history-weighted bound holds at every k.
    let noisy =
        StrongOracle::noisy_diagonal_quadratic_on_ball(diag, &ball, 0.05, q(1.0), 4, 1.0).unwrap();
    let run_noisy = run_strong_gm(&noisy, &ball, &x0, 200).unwrap();
    let steps = run_noisy.step_norms.as_ref().unwrap();
    for k in 1..=200usize {
        let bound = strong_bound(k, 1.0, 0.1, r0_sq.sqrt(), 0.05, q(1.0), steps).unwrap();
        let gap = run_noisy.f_hat_history[k - 1];
        assert!(
            gap <= bound + 1e-9,
            "strong-oracle noisy envelope violated at k={k}: {gap:.3e} > {bound:.3e}"
        );
    }
    println!("acceptance 4 (strong-oracle linear rate with history-weighted error sum): PASS");
}

#[test]
fn criterion_05_mirror_prox_bound_and_stopping() {
    let b = vec![vec![0.0, 1.0], vec![-1.0, 0.0]]; // operator norm 1
    let z0 = vec![1.0, 0.0, 1.0, 0.0];

    // Gap envelope along 500 iterations (ε too small to stop early).
    let problem = SaddleProblem::bilinear_on_balls(b.clone(), 1.0, 1.0).unwrap();
    let vi = saddle_to_vi(problem, 0.0, q(1.0)).unwrap();
    let d = vi.set.diameter_sq_from(&z0);
    let run = run_mirror_prox(&vi.model, &vi.set, &z0, 1e-12, 1.0, 500).unwrap();
    assert_eq!(run.iterations(), 500);
    let gaps = run.gap_history.as_ref().unwrap();
    for n in 1..=500usize {
        let bound = vi_bound(n, 1.0, d, 0.0, q(1.0)).unwrap();
        assert!(
            gaps[n - 1] <= bound + 1e-9,
            "Mirror Prox envelope violated at N={n}: {:.3e} > {bound:.3e}",
            gaps[n - 1]
        );
    }
    // The reported trace gap is the duality gap of the averaged point.
    let final_gap = vi.gap(&run.output_point).unwrap();
    assert!((final_gap - gaps[499]).abs() <= 1e-9);

    // Stopping rule fires exactly at S_N ≥ D/(2ε).
    let problem2 = SaddleProblem::bilinear_on_balls(b, 1.0, 1.0).unwrap();
    let vi2 = saddle_to_vi(problem2, 0.0, q(1.0)).unwrap();
    let eps = 0.05;
    let run2 = run_mirror_prox(&vi2.model, &vi2.set, &z0, eps, 1.0, 100_000).unwrap();
    assert_eq!(run2.termination, Termination::Certificate);
    let s = run2.s_history.as_ref().unwrap();
    let threshold = d / (2.0 * eps);
    assert!(s[s.len() - 1] >= threshold);
    assert!(s[s.len() - 2] < threshold);
    println!("acceptance 5 (Mirror Prox duality-gap envelope and stopping certificate): PASS");
}

#[test]
fn criterion_06_universal_epsilon_certificate() {
    let problem = Problem::BestApprox(generate_best_approx(100, 1).unwrap());
    let ball = EuclideanBall::unit(100);
    let f_star = problem.analytic_f_star(&ball).unwrap();
    let eps = 1e-3;
    let degree = q(0.5);
    let oracle = problem.holder_oracle(0.0, degree).unwrap();
    let schedule = DeltaSchedule::universal(eps, &ball, degree).unwrap();
    let config = GmConfig::new(1.0, 100_000).unwrap();
    let run =
        run_adaptive_fgm(&oracle, &ball, &problem.initial_point(), &schedule, &config).unwrap();
    assert_eq!(run.termination, Termination::Certificate);
    let gap = problem.f(&run.output_point) - f_star;
    assert!(
        gap <= eps + 1e-9,
        "universal certificate violated: gap={gap:.3e} > eps={eps}"
    );
    let bound = universal_complexity_bound(eps, ball.radius_sq().sqrt(), &[(0.0, 2.0)]).unwrap();
    assert!(
        (run.iterations() as f64) <= 2.0 * bound,
        "universal iteration count {} exceeds 2× bound {bound:.3e}",
        run.iterations()
    );
    println!(
        "acceptance 6 (universal method ε-certificate, {} iterations): PASS",
        run.iterations()
    );
}

/// Shared desk-scale comparison harness: runs the universal method and all
/// applicable baselines with one budget, returning (name, final gap).
fn run_comparison(problem: &Problem, f_min: f64, iters: usize, eps: f64) -> Vec<(String, f64)> {
    let ball = EuclideanBall::unit(problem.dim());
    let x0 = problem.initial_point();
    let degree = q(0.9);
    let mut results = Vec::new();

    let oracle = problem.holder_oracle(0.0, degree).unwrap();
    let schedule = DeltaSchedule::universal(eps, &ball, degree).unwrap();
    let config = GmConfig::new(1.0, iters).unwrap();
    let run = run_adaptive_fgm(&oracle, &ball, &x0, &schedule, &config).unwrap();
    results.push((
        "ufgm".to_string(),
        run.f_hat_history.last().unwrap() - f_min,
    ));

    let f_star = problem.analytic_f_star(&ball);
    let mut rules = vec![
        StepRule::constant(),
        StepRule::fixed_length(),
        StepRule::non_summable(),
        StepRule::sqr_sum_non_sum(),
        StepRule::quad_grad(),
        StepRule::adagrad(),
        StepRule::adamirror(),
    ];
    if let Some(fs) = f_star {
        rules.push(StepRule::polyak(fs));
    }
    for rule in rules {
        let run = run_projected_subgradient(
            |x| problem.subgrad(x),
            |x| problem.f(x),
            &ball,
            &x0,
            &rule,
            iters,
        )
        .unwrap();
        results.push((
            rule.name().to_string(),
            run.f_hat_history.last().unwrap() - f_min,
        ));
    }
    results
}

#[test]
fn criterion_07_best_approximation_comparison() {
    let problem = Problem::BestApprox(generate_best_approx(500, 1).unwrap());
    let ball = EuclideanBall::unit(500);
    let f_min = problem.analytic_f_star(&ball).unwrap();
    let results = run_comparison(&problem, f_min, 2000, 1e-5);
    let ufgm_gap = results[0].1;
    for (name, gap) in &results[1..] {
        assert!(
            ufgm_gap < *gap,
            "ufgm gap {ufgm_gap:.3e} not strictly below {name} gap {gap:.3e}"
        );
    }
    println!(
        "acceptance 7 (best-approximation comparison, ufgm gap {:.2e} best of {}): PASS",
        ufgm_gap,
        results.len()
    );
}

#[test]
fn criterion_08_fts_comparison() {
    let problem = Problem::Fts(generate_fts(200, 25, 1).unwrap());
    let ball = EuclideanBall::unit(200);
    let reference = reference_fmin(&problem, &ball, 60_000);
    assert_eq!(reference.provenance, FminProvenance::ReferenceSolve);
    assert!(
        reference.uncertainty <= 1e-6,
        "reference certificate too loose: {:.3e}",
        reference.uncertainty
    );
    let results = run_comparison(&problem, reference.value, 2000, 1e-5);
    let ufgm_gap = results[0].1;
    let best_baseline = results[1..]
        .iter()
        .map(|(_, g)| *g)
        .fold(f64::INFINITY, f64::min);
    assert!(
        ufgm_gap <= 1.1 * best_baseline,
        "ufgm gap {ufgm_gap:.3e} exceeds 1.1 × best baseline {best_baseline:.3e}"
    );
    for want in ["constant", "fixed-length"] {
        let gap = results
            .iter()
            .find(|(n, _)| n == want)
            .map(|(_, g)| *g)
            .unwrap();
        assert!(
            10.0 * ufgm_gap <= gap,
            "ufgm gap {ufgm_gap:.3e} not 10× below {want} gap {gap:.3e}"
        );
    }
    println!("acceptance 8 (Fermat–Torricelli–Steiner comparison, ufgm gap {ufgm_gap:.2e}): PASS");
}

#[test]
fn criterion_09_brute_force_oracles() {
    // Ball projection and prox step against exhaustive 2-D search:
    // the closed form dominates every feasible grid point and the grid
    // minimum value agrees within 2e−3.
    let ball = EuclideanBall::unit(2);
    let mut rng = Xoshiro256pp::seed_from_u64(9);
    let grid_min = |objective: &dyn Fn(&[f64]) -> f64| -> f64 {
        let mut best = f64::INFINITY;
        let steps = 2000usize;
        for i in 0..=steps {
            let x = -1.0 + i as f64 * 1e-3;
            for j in 0..=steps {
                let p = [x, -1.0 + j as f64 * 1e-3];
                if linalg::norm_sq(&p) <= 1.0 + 1e-12 {
                    best = best.min(objective(&p));
                }
            }
        }
        best
    };
    for _ in 0..25 {
        let target: Vec<f64> = (0..2).map(|_| 4.0 * rng.next_f64() - 2.0).collect();
        let proj = ball.project(&target);
        let obj = |p: &[f64]| linalg::dist(p, &target);
        let brute = grid_min(&obj);
        assert!(obj(&proj) <= brute + 1e-10);
        assert!(brute - obj(&proj) <= 2e-3);
    }
    for _ in 0..25 {
        let g: Vec<f64> = (0..2).map(|_| 4.0 * rng.next_f64() - 2.0).collect();
        let anchor = ball.project(
            &(0..2)
                .map(|_| 2.0 * rng.next_f64() - 1.0)
                .collect::<Vec<_>>(),
        );
        let weight = 0.3 + 2.0 * rng.next_f64();
        let sol = prox_linear(&g, &anchor, weight, &ball).unwrap();
        let obj = |p: &[f64]| {
            linalg::dot(&g, &linalg::sub(p, &anchor))
                + 0.5 * weight * linalg::dist(p, &anchor).powi(2)
        };
        let brute = grid_min(&obj);
        assert!(obj(&sol) <= brute + 1e-10);
        assert!(brute - obj(&sol) <= 2e-3);
    }

    // Certified Hölder constant on an (r, ν, q, δ) grid of ≥ 10⁴ points.
    let mut points = 0usize;
    for &nu in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        for qi in 0..8 {
            let qv = qi as f64 / 8.0 * (1.0 + nu) * 0.99;
            for &delta in &[0.01, 0.1, 1.0, 10.0] {
                let l = holder_l(delta, nu, qv, 2.0, true).unwrap();
                let mut r: f64 = 1e-3;
                while r <= 100.0 {
                    let lhs = 2.0 / (1.0 + nu) * r.powf(1.0 + nu);
                    let rhs = 0.5 * l * r * r + delta * r.powf(qv);
                    assert!(
                        lhs <= rhs * (1.0 + 1e-10) + 1e-12,
                        "Hölder certificate violated at nu={nu} q={qv} delta={delta} r={r}"
                    );
                    points += 1;
                    r *= 1.12;
                }
            }
        }
    }
    assert!(points >= 10_000, "grid too small: {points}");
    println!("acceptance 9 (brute-force oracles: projection, prox, Hölder constant): PASS");
}

#[test]
fn criterion_10_property_suite() {
    let (ball, x0, _) = quad_setup();

    // α root identity and A-growth along a seeded fast-gradient run.
    let oracle =
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.05, Perturbation::new(10)).unwrap();
    let config = GmConfig::new(0.4, 150).unwrap();
    let run = run_adaptive_fgm(&oracle, &ball, &x0, &DeltaSchedule::FromOracle, &config).unwrap();
    let a_hist = run.a_history.as_ref().unwrap();
    let alpha_hist = run.alpha_history.as_ref().unwrap();
    let l_max = run.l_max();
    let mut a_prev = 0.0;
    for k in 0..run.iterations() {
        let (l, alpha, a) = (run.l_history[k], alpha_hist[k], a_hist[k]);
        let residual = l * alpha * alpha - alpha - a_prev;
        assert!(residual.abs() <= 1e-10 * (1.0 + l * alpha * alpha));
        assert!((a - (a_prev + alpha)).abs() <= 1e-12 * a.max(1.0));
        let n = (k + 1) as f64;
        assert!(a >= (n + 1.0) * (n + 1.0) / (8.0 * l_max) - 1e-12);
        a_prev = a;
    }

    // Acceptance-inequality replay from the trace of an exact gradient run.
    let exact =
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.0, Perturbation::new(11)).unwrap();
    let gm_run = run_adaptive_gm(&exact, &ball, &x0, &GmConfig::new(1.0, 100).unwrap()).unwrap();
    for k in 0..gm_run.iterations() {
        let xk = &gm_run.iterates[k];
        let xk1 = &gm_run.iterates[k + 1];
        let l = gm_run.l_history[k];
        let d = linalg::dist(xk1, xk);
        let lhs = quad_f(xk1);
        let rhs = quad_f(xk) + linalg::dot(&quad_grad(xk), &linalg::sub(xk1, xk)) + 0.5 * l * d * d;
        assert!(lhs <= rhs + 1e-9 * (1.0 + rhs.abs()));
    }

    // Young collapse on the full parameter grid.
    for &delta in &[0.1, 1.0, 10.0] {
        for &qv in &[0.0, 0.5, 1.0, 1.5] {
            for &rho in &[0.01, 1.0, 100.0] {
                let (inc, dh) = collapse_to_q0(delta, q(qv), rho).unwrap();
                let mut r: f64 = 0.0;
                while r <= 10.0 {
                    assert!(delta * r.powf(qv) <= 0.5 * inc * r * r + dh + 1e-9);
                    r += 0.05;
                }
            }
        }
    }

    // Monotonicity: exact skew bilinear model sums to zero; the biased
    // variant stays within its certified δ.
    let b = vec![vec![0.0, 2.0], vec![-2.0, 0.0]];
    let vi = saddle_to_vi(
        SaddleProblem::bilinear_on_balls(b.clone(), 1.0, 1.0).unwrap(),
        0.0,
        q(1.0),
    )
    .unwrap();
    let vib = qopt::vi::saddle_to_vi_biased(
        SaddleProblem::bilinear_on_balls(b, 1.0, 1.0).unwrap(),
        0.2,
        12,
        q(1.0),
    )
    .unwrap();
    let mut rng = Xoshiro256pp::seed_from_u64(13);
    for _ in 0..100 {
        let x: Vec<f64> = (0..4).map(|_| rng.next_f64() - 0.5).collect();
        let y: Vec<f64> = (0..4).map(|_| rng.next_f64() - 0.5).collect();
        assert!((vi.model.psi(&x, &y) + vi.model.psi(&y, &x)).abs() <= 1e-12);
        let s = vib.model.psi(&x, &y) + vib.model.psi(&y, &x);
        assert!(s <= vib.model.delta * linalg::dist(&x, &y) + 1e-9);
    }

    // Averaging reproducibility: gradient-method weighted average.
    let mut wsum = 0.0;
    let mut acc = [0.0; 5];
    for (k, l) in gm_run.l_history.iter().enumerate() {
        wsum += 1.0 / l;
        for (a, xi) in acc.iter_mut().zip(&gm_run.iterates[k + 1]) {
            *a += xi / l;
        }
    }
    for (a, o) in acc.iter().map(|v| v / wsum).zip(&gm_run.output_point) {
        assert!((a - o).abs() <= 1e-12);
    }

    // Strong-oracle master recursion from the trace with known x_* = 0.
    let sball = EuclideanBall::new(vec![0.0, 0.0], 2.0_f64.sqrt()).unwrap();
    let noisy = StrongOracle::noisy_diagonal_quadratic_on_ball(
        vec![0.1, 1.0],
        &sball,
        0.05,
        q(1.0),
        14,
        1.0,
    )
    .unwrap();
    let srun = run_strong_gm(&noisy, &sball, &[1.0, 1.0], 100).unwrap();
    let f_exact = |x: &[f64]| 0.5 * (0.1 * x[0] * x[0] + x[1] * x[1]);
    for k in 0..100usize {
        let rk = linalg::norm_sq(&srun.iterates[k]);
        let rk1 = linalg::norm_sq(&srun.iterates[k + 1]);
        let step = srun.step_norms.as_ref().unwrap()[k];
        let rhs = (1.0 - 0.1) * rk
            + 2.0 * (0.0 - f_exact(&srun.iterates[k + 1]))
            + 2.0 * 0.05 * step
            + 1e-9;
        assert!(rk1 <= rhs, "master recursion violated at k={k}");
    }

    // CSV determinism: identical seeded runs produce byte-identical CSV.
    let csv_of = |seed: u64| -> String {
        let o = make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.1, Perturbation::new(seed))
            .unwrap();
        let r = run_adaptive_gm(&o, &ball, &x0, &GmConfig::new(1.0, 40).unwrap()).unwrap();
        r.to_csv(Some(0.0))
    };
    assert_eq!(csv_of(99), csv_of(99));
    assert_ne!(csv_of(99), csv_of(100));

    println!("acceptance 10 (property suite: identities, replay, determinism): PASS");
}

/// Mirror Prox replay: recompute both prox steps from the trace of a
/// deterministic model and confirm the recorded iterates and the
/// acceptance inequality.
#[test]
fn mirror_prox_trace_replay() {
    let b = vec![vec![0.0, 1.5], vec![-1.5, 0.0]];
    let vi = saddle_to_vi(
        SaddleProblem::bilinear_on_balls(b, 1.0, 1.0).unwrap(),
        0.0,
        q(1.0),
    )
    .unwrap();
    let z0 = vec![0.8, 0.0, 0.6, 0.0];
    let run = run_mirror_prox(&vi.model, &vi.set, &z0, 1e-6, 1.0, 60).unwrap();
    for k in 0..run.iterations() {
        let z = &run.iterates[k];
        let l = run.l_history[k];
        let w = vi.model.prox_step(z, z, l, &vi.set).unwrap();
        let z_next = vi.model.prox_step(&w, z, l, &vi.set).unwrap();
        assert!(linalg::dist(&z_next, &run.iterates[k + 1]) <= 1e-12);
        let dwz = linalg::dist(&w, z);
        let dwz1 = linalg::dist(&w, &z_next);
        let lhs = vi.model.psi(&z_next, z);
        let rhs =
            vi.model.psi(&z_next, &w) + vi.model.psi(&w, z) + 0.5 * l * (dwz * dwz + dwz1 * dwz1);
        assert!(lhs <= rhs + 1e-9 * (1.0 + rhs.abs()));
    }
}

/// Fast-gradient replay: reconstruct u_k and y_k from the trace via the
/// convex-combination identities and re-verify the acceptance inequality.
#[test]
fn fgm_trace_replay() {
    let (ball, x0, _) = quad_setup();
    let oracle =
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.0, Perturbation::new(15)).unwrap();
    let run = run_adaptive_fgm(
        &oracle,
        &ball,
        &x0,
        &DeltaSchedule::FromOracle,
        &GmConfig::new(1.0, 80).unwrap(),
    )
    .unwrap();
    let a_hist = run.a_history.as_ref().unwrap();
    let alpha_hist = run.alpha_history.as_ref().unwrap();
    let mut u = x0.clone();
    let mut a_prev = 0.0;
    for k in 0..run.iterations() {
        let (alpha, a) = (alpha_hist[k], a_hist[k]);
        let xk = &run.iterates[k];
        let xk1 = &run.iterates[k + 1];
        let y = linalg::weighted_mean(&u, alpha, xk, a_prev);
        // u_{k+1} from the x-update identity x_{k+1} = (α·u_{k+1} + A_k·x_k)/A_{k+1}.
        let u_next: Vec<f64> = xk1
            .iter()
            .zip(xk)
            .map(|(x1, xk)| (a * x1 - a_prev * xk) / alpha)
            .collect();
        assert!(ball.contains(&ball.project(&u_next)));
        let d = linalg::dist(xk1, &y);
        let lhs = quad_f(xk1);
        let rhs = quad_f(&y)
            + linalg::dot(&quad_grad(&y), &linalg::sub(xk1, &y))
            + 0.5 * run.l_history[k] * d * d;
        assert!(lhs <= rhs + 1e-9 * (1.0 + rhs.abs()));
        u = u_next;
        a_prev = a;
    }
}
