//! Adaptive inexact gradient method with a degree-`q` model.
//!
//! Each iteration finds the smallest constant (by doubling from half the
//! previous one) for which the model's upper inequality holds at the prox
//! candidate, then accepts the candidate. The output is the `1/L`-weighted
//! average of the iterates, whose gap obeys [`gm_bound`].

use crate::error::CoreError;
use crate::linalg;
use crate::model::{Degree, InexactOracle};
use crate::sets::FeasibleSet;
use crate::trace::{RunResult, Termination};
use crate::{l_trial_floor, ACCEPTANCE_SLACK};

/// Configuration for the adaptive gradient and fast gradient methods.
#[derive(Clone, Copy, Debug)]
pub struct GmConfig {
    /// Initial line-search constant, `> 0`.
    pub l0: f64,
    /// Iteration budget.
    pub max_iters: usize,
    /// Optional early stop: terminate once `f̂ − f_star ≤ target_gap`.
    /// Requires `f_star`; uses exact objective values when the oracle
    /// provides them, its model values otherwise.
    pub target_gap: Option<f64>,
    /// Reference optimal value for the `target_gap` rule.
    pub f_star: Option<f64>,
    /// Maximum doublings within one iteration before giving up (an oracle
    /// violating its certificate).
    pub line_search_cap: usize,
}

impl GmConfig {
    pub fn new(l0: f64, max_iters: usize) -> Result<Self, CoreError> {
        if !(l0 > 0.0) {
            return Err(CoreError::invalid("L0", "must be positive"));
        }
        Ok(Self {
            l0,
            max_iters,
            target_gap: None,
            f_star: None,
            line_search_cap: 60,
        })
    }

    pub fn with_target(mut self, f_star: f64, target_gap: f64) -> Self {
        self.f_star = Some(f_star);
        self.target_gap = Some(target_gap);
        self
    }
}

/// Tests the acceptance inequality
/// `f(x⁺) ≤ f(y) + ψ(x⁺) + (L/2)‖x⁺−y‖² + δ‖x⁺−y‖^q`
/// with the crate-wide relative slack.
pub(crate) fn acceptance_holds(
    f_candidate: f64,
    f_center: f64,
    psi_val: f64,
    l: f64,
    dist: f64,
    delta: f64,
    q: f64,
) -> bool {
    let rhs = f_center + psi_val + 0.5 * l * dist * dist + delta * dist.powf(q);
    f_candidate <= rhs + ACCEPTANCE_SLACK * (1.0 + f_candidate.abs() + rhs.abs())
}

/// Runs the adaptive gradient method from `x0`.
///
/// The theorem bound [`gm_bound`] is certified for oracles with a two-sided
/// (convex) model; the flag is not enforced at runtime, and one-sided noisy
/// oracles are accepted as inputs.
pub fn run_adaptive_gm(
    oracle: &InexactOracle,
    set: &dyn FeasibleSet,
    x0: &[f64],
    config: &GmConfig,
) -> Result<RunResult, CoreError> {
    if !set.contains(x0) {
        return Err(CoreError::InfeasibleStart);
    }
    if !(config.l0 > 0.0) {
        return Err(CoreError::invalid("L0", "must be positive"));
    }
    let q = oracle.degree.value();
    let mut result = RunResult::new(x0.to_vec());
    result.f_hat_is_exact = oracle.exact_f.is_some();

    let mut x = x0.to_vec();
    let mut current = oracle.evaluate(&x);
    result.oracle_calls += 1;
    let mut l_prev = config.l0;
    let l_floor = l_trial_floor(config.l0);

    // Running 1/L-weighted average of the iterates.
    let mut weight_sum = 0.0;
    let mut weighted_x = vec![0.0; x.len()];

    for k in 0..config.max_iters {
        let delta = current.delta_at_center;
        let mut l_trial = (0.5 * l_prev).max(l_floor);
        let mut trials = 0usize;
        let (x_next, eval_next, l_accepted) = loop {
            trials += 1;
            if trials > config.line_search_cap {
                return Err(CoreError::LineSearchExhausted {
                    iteration: k,
                    cap: config.line_search_cap,
                });
            }
            let candidate = current.prox(&x, l_trial, set)?;
            let trial_eval = oracle.evaluate(&candidate);
            result.oracle_calls += 1;
            let d = linalg::dist(&candidate, &x);
            if acceptance_holds(
                trial_eval.f_center,
                current.f_center,
                current.psi(&candidate),
                l_trial,
                d,
                delta,
                q,
            ) {
                break (candidate, trial_eval, l_trial);
            }
            l_trial *= 2.0;
        };

        weight_sum += 1.0 / l_accepted;
        for (acc, xi) in weighted_x.iter_mut().zip(&x_next) {
            *acc += xi / l_accepted;
        }
        let averaged: Vec<f64> = weighted_x.iter().map(|v| v / weight_sum).collect();

        let f_hat = match oracle.exact_f(&averaged) {
            Some(v) => v,
            None => eval_next.f_center,
        };

        result.iterates.push(x_next.clone());
        result.l_history.push(l_accepted);
        result.line_search_counts.push(trials);
        result.delta_history.push(delta);
        result.f_hat_history.push(f_hat);
        result.calls_history.push(result.oracle_calls);

        x = x_next;
        current = eval_next;
        l_prev = l_accepted;

        if let (Some(target), Some(f_star)) = (config.target_gap, config.f_star) {
            if f_hat - f_star <= target {
                result.termination = Termination::TargetGap;
                break;
            }
        }
    }

    result.output_point = if weight_sum > 0.0 {
        weighted_x.iter().map(|v| v / weight_sum).collect()
    } else {
        x.clone()
    };
    Ok(result)
}

/// Gap bound after `N` iterations of the adaptive gradient method:
/// `2LR²/N + 2(√2·R)^q·δ/N^{q/2}`.
pub fn gm_bound(n: usize, l: f64, r: f64, delta: f64, q: Degree) -> Result<f64, CoreError> {
    if n < 1 {
        return Err(CoreError::invalid("N", "must be at least 1"));
    }
    let q = q.value();
    let n = n as f64;
    Ok(
        2.0 * l * r * r / n
            + 2.0 * (std::f64::consts::SQRT_2 * r).powf(q) * delta / n.powf(q / 2.0),
    )
}
