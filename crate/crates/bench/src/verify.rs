//! Bound-envelope verification on synthetic certified scenarios.
//!
//! Each suite runs a solver on a problem with a known optimal value and a
//! certified oracle, checks the theorem bound at every iteration, and
//! prints measured gap vs. bound at log-spaced checkpoints.

use qopt::linalg;
use qopt::model::{make_absolute_noise_oracle, make_holder_oracle, Degree, Perturbation};
use qopt::sets::{EuclideanBall, FeasibleSet};
use qopt::strong::StrongOracle;
use qopt::trace::Termination;
use qopt::vi::SaddleProblem;
use qopt::{
    fgm_bound, gm_bound, run_adaptive_fgm, run_adaptive_gm, run_mirror_prox, run_restarted_fgm,
    run_strong_gm, saddle_to_vi, strong_bound, vi_bound, DeltaSchedule, GmConfig,
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

fn checkpoints(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = 1usize;
    while k < n {
        out.push(k);
        k = (k * 2).min(k + 250);
    }
    out.push(n);
    out
}

/// Checks `gap[N−1] ≤ bound(N) + 1e−9` for all `N`, printing checkpoint
/// lines. Returns false if any `N` fails.
fn check_envelope(label: &str, gaps: &[f64], bound: impl Fn(usize) -> f64) -> bool {
    let n = gaps.len();
    let mut ok = true;
    let mut worst: f64 = f64::NEG_INFINITY;
    for (i, &gap) in gaps.iter().enumerate() {
        let b = bound(i + 1);
        if gap > b + 1e-9 {
            ok = false;
        }
        worst = worst.max(gap - b);
    }
    for &cp in &checkpoints(n) {
        let b = bound(cp);
        let gap = gaps[cp - 1];
        let status = if gap <= b + 1e-9 { "pass" } else { "FAIL" };
        println!("{label} N={cp}: gap={gap:.6e} bound={b:.6e} {status}");
    }
    println!(
        "{label}: {} (worst excess {:.3e})",
        if ok { "all pass" } else { "FAILED" },
        worst
    );
    ok
}

fn x0_unit(dim: usize) -> Vec<f64> {
    let mut x0 = vec![0.0; dim];
    x0[0] = 1.0;
    x0
}

fn suite_gm() -> bool {
    let ball = EuclideanBall::unit(5);
    let x0 = x0_unit(5);
    let r = 0.5_f64.sqrt();
    let mut ok = true;
    for &noise in &[0.0, 0.1] {
        let oracle =
            make_absolute_noise_oracle(quad_grad, quad_f, 1.0, noise, Perturbation::new(1))
                .unwrap();
        let run = run_adaptive_gm(&oracle, &ball, &x0, &GmConfig::new(1.0, 1000).unwrap()).unwrap();
        ok &= check_envelope(&format!("gm delta={noise}"), &run.f_hat_history, |n| {
            gm_bound(n, 1.0, r, noise, q(1.0)).unwrap()
        });
    }
    ok
}

fn suite_fgm() -> bool {
    let ball = EuclideanBall::unit(5);
    let x0 = x0_unit(5);
    let r = 0.5_f64.sqrt();
    let mut ok = true;

    let exact =
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.0, Perturbation::new(2)).unwrap();
    let run = run_adaptive_fgm(
        &exact,
        &ball,
        &x0,
        &DeltaSchedule::FromOracle,
        &GmConfig::new(1.0, 500).unwrap(),
    )
    .unwrap();
    ok &= check_envelope("fgm delta=0", &run.f_hat_history, |n| {
        fgm_bound(n, 1.0, r, 0.0, q(1.0)).unwrap()
    });

    for &qv in &[0.5, 1.0, 1.5] {
        let oracle = make_holder_oracle(quad_grad, quad_f, 1.0, 1.0, 0.01, q(qv)).unwrap();
        let run = run_adaptive_fgm(
            &oracle,
            &ball,
            &x0,
            &DeltaSchedule::FromOracle,
            &GmConfig::new(1.0, 500).unwrap(),
        )
        .unwrap();
        ok &= check_envelope(&format!("fgm delta=0.01 q={qv}"), &run.f_hat_history, |n| {
            fgm_bound(n, 1.0, r, 0.01, q(qv)).unwrap()
        });
    }
    ok
}

fn suite_restart() -> bool {
    let ball = EuclideanBall::unit(2);
    let oracle =
        make_absolute_noise_oracle(quad_grad, quad_f, 1.0, 0.0, Perturbation::new(3)).unwrap();
    let eps = 1e-4;
    let run = run_restarted_fgm(&oracle, &ball, &[1.0, 0.0], 1.0, 1.0, eps, 1.0, q(1.0)).unwrap();
    let dist_sq = linalg::norm_sq(&run.output_point);
    let segments = run.iterations() / 4;
    let ok = dist_sq <= eps && segments == 15;
    println!(
        "restart: {} segments of 4 iterations, final distance² = {dist_sq:.3e} (target {eps:.1e}): {}",
        segments,
        if ok { "pass" } else { "FAIL" }
    );
    ok
}

fn suite_strong() -> bool {
    let ball = EuclideanBall::new(vec![0.0, 0.0], 2.0_f64.sqrt()).unwrap();
    let x0 = [1.0, 1.0];
    let r0 = 2.0_f64.sqrt();
    let mut ok = true;

    let exact = StrongOracle::exact_diagonal_quadratic(vec![0.1, 1.0], q(1.0)).unwrap();
    let run = run_strong_gm(&exact, &ball, &x0, 200).unwrap();
    ok &= check_envelope("strong delta=0", &run.f_hat_history, |k| {
        0.5 * r0 * r0 * (-(k as f64) * 0.1).exp()
    });

    let noisy =
        StrongOracle::noisy_diagonal_quadratic_on_ball(vec![0.1, 1.0], &ball, 0.05, q(1.0), 4, 1.0)
            .unwrap();
    let run_noisy = run_strong_gm(&noisy, &ball, &x0, 200).unwrap();
    let steps = run_noisy.step_norms.clone().unwrap();
    ok &= check_envelope("strong delta=0.05", &run_noisy.f_hat_history, |k| {
        strong_bound(k, 1.0, 0.1, r0, 0.05, q(1.0), &steps).unwrap()
    });
    ok
}

fn suite_vi() -> bool {
    let b = vec![vec![0.0, 1.0], vec![-1.0, 0.0]];
    let problem = SaddleProblem::bilinear_on_balls(b, 1.0, 1.0).unwrap();
    let vi = saddle_to_vi(problem, 0.0, q(1.0)).unwrap();
    let z0 = vec![1.0, 0.0, 1.0, 0.0];
    let d = vi.set.diameter_sq_from(&z0);
    let run = run_mirror_prox(&vi.model, &vi.set, &z0, 1e-12, 1.0, 500).unwrap();
    let gaps = run.gap_history.clone().unwrap();
    let mut ok = check_envelope("vi skew-bilinear delta=0", &gaps, |n| {
        vi_bound(n, 1.0, d, 0.0, q(1.0)).unwrap()
    });
    // Stopping certificate on a separate run.
    let problem2 =
        SaddleProblem::bilinear_on_balls(vec![vec![0.0, 1.0], vec![-1.0, 0.0]], 1.0, 1.0).unwrap();
    let vi2 = saddle_to_vi(problem2, 0.0, q(1.0)).unwrap();
    let eps = 0.05;
    let run2 = run_mirror_prox(&vi2.model, &vi2.set, &z0, eps, 1.0, 100_000).unwrap();
    let fired = run2.termination == Termination::Certificate;
    let s = run2.s_history.as_ref().unwrap();
    let exact_stop =
        s[s.len() - 1] >= d / (2.0 * eps) && (s.len() < 2 || s[s.len() - 2] < d / (2.0 * eps));
    println!(
        "vi stopping rule at eps={eps}: fired={fired} exact={exact_stop}: {}",
        if fired && exact_stop { "pass" } else { "FAIL" }
    );
    ok &= fired && exact_stop;
    ok
}

/// Runs one suite by name; `Ok(true)` means every check passed.
pub fn run_suite(name: &str) -> Result<bool, String> {
    match name {
        "gm" => Ok(suite_gm()),
        "fgm" => Ok(suite_fgm()),
        "restart" => Ok(suite_restart()),
        "strong" => Ok(suite_strong()),
        "vi" => Ok(suite_vi()),
        "all" => Ok(suite_gm() & suite_fgm() & suite_restart() & suite_strong() & suite_vi()),
        other => Err(format!(
            "unknown suite `{other}` (expected gm, fgm, restart, strong, vi or all)"
        )),
    }
}
