//! Projected subgradient baselines with eight classical step-size rules
//! and their rule-specific averaging schemes.
//!
//! These are the comparison methods for the benchmark harness: plain
//! `x_{k+1} = project(x_k − γ_k·∂f(x_k))` with `γ_k` from the rule, and a
//! running average (uniform for most rules, `γ`-weighted for the
//! gradient-quadratic rule, `γ^{−m}`-weighted for the adaptive mirror
//! rule) as the reported point.

use crate::error::CoreError;
use crate::linalg;
use crate::sets::FeasibleSet;
use crate::trace::{RunResult, Termination};

/// Step-size rule of the projected subgradient method.
///
/// Default constants follow the benchmark protocol; every constant is a
/// field and can be overridden.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepRule {
    /// `γ_k = c` (default `c = 0.1`).
    Constant { c: f64 },
    /// `γ_k = c/‖g_k‖` (default `c = 0.2`).
    FixedLength { c: f64 },
    /// `γ_k = c/√k` (default `c = 0.1`).
    NonSummable { c: f64 },
    /// `γ_k = c/k` (default `c = 0.5`).
    SqrSumNonSum { c: f64 },
    /// `γ_k = c/‖g_k‖²` (default `c = 0.2`), with `γ`-weighted averaging.
    QuadGrad { c: f64 },
    /// `γ_k = θ₀/√(Σ_{j≤k}‖g_j‖² + α)` (defaults `θ₀ = 1/√2`, `α = 1e−8`).
    AdaGrad { theta0: f64, alpha: f64 },
    /// `γ_k = (f(x_k) − f_*)/‖g_k‖²`; requires the optimal value.
    Polyak { f_star: f64 },
    /// `γ_k = √2/(‖g_k‖·√k)` with `γ^{−m}`-weighted averaging, `m ≥ −1`
    /// (default `m = −1`, the classical weighted scheme).
    AdaMirror { m: f64 },
}

impl StepRule {
    pub fn constant() -> Self {
        StepRule::Constant { c: 0.1 }
    }

    pub fn fixed_length() -> Self {
        StepRule::FixedLength { c: 0.2 }
    }

    pub fn non_summable() -> Self {
        StepRule::NonSummable { c: 0.1 }
    }

    pub fn sqr_sum_non_sum() -> Self {
        StepRule::SqrSumNonSum { c: 0.5 }
    }

    pub fn quad_grad() -> Self {
        StepRule::QuadGrad { c: 0.2 }
    }

    pub fn adagrad() -> Self {
        StepRule::AdaGrad {
            theta0: 1.0 / std::f64::consts::SQRT_2,
            alpha: 1e-8,
        }
    }

    pub fn polyak(f_star: f64) -> Self {
        StepRule::Polyak { f_star }
    }

    pub fn adamirror() -> Self {
        StepRule::AdaMirror { m: -1.0 }
    }

    /// Stable rule name used in traces and reports.
    pub fn name(&self) -> &'static str {
        match self {
            StepRule::Constant { .. } => "constant",
            StepRule::FixedLength { .. } => "fixed-length",
            StepRule::NonSummable { .. } => "nonsum",
            StepRule::SqrSumNonSum { .. } => "sqrsum-nonsum",
            StepRule::QuadGrad { .. } => "quad-grad",
            StepRule::AdaGrad { .. } => "adagrad",
            StepRule::Polyak { .. } => "polyak",
            StepRule::AdaMirror { .. } => "adamirror",
        }
    }

    fn validate(&self) -> Result<(), CoreError> {
        let ok = match *self {
            StepRule::Constant { c }
            | StepRule::FixedLength { c }
            | StepRule::NonSummable { c }
            | StepRule::SqrSumNonSum { c }
            | StepRule::QuadGrad { c } => c > 0.0,
            StepRule::AdaGrad { theta0, alpha } => theta0 > 0.0 && alpha > 0.0,
            StepRule::Polyak { f_star } => f_star.is_finite(),
            StepRule::AdaMirror { m } => m >= -1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(CoreError::invalid("rule", "rule constants out of range"))
        }
    }
}

/// Step size at iteration `k ≥ 1`.
///
/// `grad_norm_sq_sum` is `Σ_{j≤k} ‖g_j‖²` including the current gradient
/// (used by the adaptive rule only). Rules that divide by the gradient
/// norm return [`CoreError::ZeroGradient`] at `grad_norm = 0`, which
/// signals optimality rather than failure.
pub fn step_size(
    rule: &StepRule,
    k: usize,
    grad_norm: f64,
    f_val: f64,
    grad_norm_sq_sum: f64,
) -> Result<f64, CoreError> {
    if k < 1 {
        return Err(CoreError::invalid("k", "iterations count from 1"));
    }
    rule.validate()?;
    let needs_norm = matches!(
        rule,
        StepRule::FixedLength { .. }
            | StepRule::QuadGrad { .. }
            | StepRule::Polyak { .. }
            | StepRule::AdaMirror { .. }
    );
    if needs_norm && grad_norm == 0.0 {
        return Err(CoreError::ZeroGradient);
    }
    Ok(match *rule {
        StepRule::Constant { c } => c,
        StepRule::FixedLength { c } => c / grad_norm,
        StepRule::NonSummable { c } => c / (k as f64).sqrt(),
        StepRule::SqrSumNonSum { c } => c / k as f64,
        StepRule::QuadGrad { c } => c / (grad_norm * grad_norm),
        StepRule::AdaGrad { theta0, alpha } => theta0 / (grad_norm_sq_sum + alpha).sqrt(),
        StepRule::Polyak { f_star } => (f_val - f_star) / (grad_norm * grad_norm),
        StepRule::AdaMirror { .. } => std::f64::consts::SQRT_2 / (grad_norm * (k as f64).sqrt()),
    })
}

/// Runs the projected subgradient method with the given rule and its
/// averaging scheme, reporting `f` at the averaged point each iteration.
///
/// A zero subgradient terminates the run successfully with the current
/// point flagged optimal.
pub fn run_projected_subgradient<G, F>(
    subgrad: G,
    f: F,
    set: &dyn FeasibleSet,
    x0: &[f64],
    rule: &StepRule,
    iters: usize,
) -> Result<RunResult, CoreError>
where
    G: Fn(&[f64]) -> Vec<f64>,
    F: Fn(&[f64]) -> f64,
{
    if !set.contains(x0) {
        return Err(CoreError::InfeasibleStart);
    }
    rule.validate()?;
    let mut result = RunResult::new(x0.to_vec());
    result.f_hat_is_exact = true;
    result.gamma_history = Some(Vec::new());

    let mut x = x0.to_vec();
    let mut grad_norm_sq_sum = 0.0;
    // Weighted running average: weight 1 (uniform), γ (quad-grad) or
    // γ^{−m} (adamirror) per iterate.
    let mut avg_weight_sum = 0.0;
    let mut avg_acc = vec![0.0; x.len()];
    result.termination = Termination::MaxIters;

    for k in 1..=iters {
        let g = subgrad(&x);
        result.oracle_calls += 1;
        let gn = linalg::norm(&g);
        grad_norm_sq_sum += gn * gn;
        let f_x = f(&x);

        let gamma = match step_size(rule, k, gn, f_x, grad_norm_sq_sum) {
            Ok(g) => g,
            Err(CoreError::ZeroGradient) => {
                result.termination = Termination::ZeroGradient;
                break;
            }
            Err(e) => return Err(e),
        };

        let weight = match *rule {
            StepRule::QuadGrad { .. } => gamma,
            StepRule::AdaMirror { m } => gamma.powf(-m),
            _ => 1.0,
        };
        avg_weight_sum += weight;
        for (acc, xi) in avg_acc.iter_mut().zip(&x) {
            *acc += weight * xi;
        }
        let averaged: Vec<f64> = avg_acc.iter().map(|v| v / avg_weight_sum).collect();

        let x_next = set.project(&linalg::axpy(&x, -gamma, &g));

        result.f_hat_history.push(f(&averaged));
        result.gamma_history.as_mut().unwrap().push(gamma);
        result.iterates.push(x_next.clone());
        result.line_search_counts.push(1);
        result.delta_history.push(0.0);
        result.calls_history.push(result.oracle_calls);

        x = x_next;
    }

    result.output_point = if avg_weight_sum > 0.0 {
        avg_acc.iter().map(|v| v / avg_weight_sum).collect()
    } else {
        x.clone()
    };
    Ok(result)
}
