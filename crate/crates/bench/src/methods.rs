//! Method resolution: maps CLI method names onto solver runs.

use clap::ValueEnum;

use qopt::model::Degree;
use qopt::sets::EuclideanBall;
use qopt::subgrad::StepRule;
use qopt::{
    reference_fmin, run_adaptive_fgm, run_adaptive_gm, run_projected_subgradient, DeltaSchedule,
    GmConfig, Problem, ReferenceValue, RunResult,
};

/// Everything `qopt-bench run`/`compare` can execute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Universal fast gradient method.
    Ufgm,
    /// Adaptive gradient method with a constant-`δ` subgradient model.
    Gm,
    /// Adaptive fast gradient method with a constant-`δ` subgradient model.
    Fgm,
    Constant,
    FixedLength,
    Nonsum,
    SqrsumNonsum,
    QuadGrad,
    Adagrad,
    Polyak,
    Adamirror,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Ufgm => "ufgm",
            Method::Gm => "gm",
            Method::Fgm => "fgm",
            Method::Constant => "constant",
            Method::FixedLength => "fixed-length",
            Method::Nonsum => "nonsum",
            Method::SqrsumNonsum => "sqrsum-nonsum",
            Method::QuadGrad => "quad-grad",
            Method::Adagrad => "adagrad",
            Method::Polyak => "polyak",
            Method::Adamirror => "adamirror",
        }
    }
}

pub struct MethodOutcome {
    pub run: RunResult,
}

/// Reference optimal value for the gap column (analytic when available).
pub fn resolve_f_min(problem: &Problem, budget: usize) -> ReferenceValue {
    let ball = EuclideanBall::unit(problem.dim());
    reference_fmin(problem, &ball, budget)
}

/// Runs one method on the unit-ball benchmark geometry.
pub fn run_method(
    problem: &Problem,
    method: Method,
    iters: usize,
    q: Option<f64>,
    eps: Option<f64>,
    delta: Option<f64>,
) -> Result<MethodOutcome, String> {
    let ball = EuclideanBall::unit(problem.dim());
    let x0 = problem.initial_point();
    let err = |e: qopt::CoreError| e.to_string();

    let run = match method {
        Method::Ufgm => {
            let degree = Degree::new(q.unwrap_or(0.9)).map_err(err)?;
            let eps = eps.unwrap_or(1e-5);
            let oracle = problem.holder_oracle(0.0, degree).map_err(err)?;
            let schedule = DeltaSchedule::universal(eps, &ball, degree).map_err(err)?;
            let config = GmConfig::new(1.0, iters).map_err(err)?;
            run_adaptive_fgm(&oracle, &ball, &x0, &schedule, &config).map_err(err)?
        }
        Method::Gm | Method::Fgm => {
            let degree = Degree::new(q.unwrap_or(0.5)).map_err(err)?;
            let delta = delta.unwrap_or(0.01);
            if delta <= 0.0 {
                return Err("gm/fgm need a positive --delta (the constant model error)".into());
            }
            let oracle = problem.holder_oracle(delta, degree).map_err(err)?;
            let config = GmConfig::new(1.0, iters).map_err(err)?;
            if method == Method::Gm {
                run_adaptive_gm(&oracle, &ball, &x0, &config).map_err(err)?
            } else {
                run_adaptive_fgm(&oracle, &ball, &x0, &DeltaSchedule::FromOracle, &config)
                    .map_err(err)?
            }
        }
        Method::Polyak => {
            let f_star = problem
                .analytic_f_star(&ball)
                .ok_or("the polyak rule needs a known optimal value and this problem has none")?;
            run_rule(problem, &ball, &x0, &StepRule::polyak(f_star), iters)?
        }
        Method::Constant => run_rule(problem, &ball, &x0, &StepRule::constant(), iters)?,
        Method::FixedLength => run_rule(problem, &ball, &x0, &StepRule::fixed_length(), iters)?,
        Method::Nonsum => run_rule(problem, &ball, &x0, &StepRule::non_summable(), iters)?,
        Method::SqrsumNonsum => run_rule(problem, &ball, &x0, &StepRule::sqr_sum_non_sum(), iters)?,
        Method::QuadGrad => run_rule(problem, &ball, &x0, &StepRule::quad_grad(), iters)?,
        Method::Adagrad => run_rule(problem, &ball, &x0, &StepRule::adagrad(), iters)?,
        Method::Adamirror => run_rule(problem, &ball, &x0, &StepRule::adamirror(), iters)?,
    };
    Ok(MethodOutcome { run })
}

fn run_rule(
    problem: &Problem,
    ball: &EuclideanBall,
    x0: &[f64],
    rule: &StepRule,
    iters: usize,
) -> Result<RunResult, String> {
    run_projected_subgradient(
        |x| problem.subgrad(x),
        |x| problem.f(x),
        ball,
        x0,
        rule,
        iters,
    )
    .map_err(|e| e.to_string())
}
