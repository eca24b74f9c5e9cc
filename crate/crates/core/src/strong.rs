//! Non-adaptive gradient method for two-sided strongly convex oracles.
//!
//! The oracle certifies the sandwich
//! `(μ/2)‖x−y‖² ≤ f(x) − f_value − ⟨g, x−y⟩ ≤ (L/2)‖x−y‖² + δ‖x−y‖^q`
//! and the method takes plain prox steps with the fixed `L` — no line
//! search, no knowledge of `μ` needed at run time. The reported point is
//! the best iterate seen so far; its gap obeys [`strong_bound`], a linear
//! rate plus a history-weighted `δ`-sum.

use std::cell::RefCell;

use crate::error::CoreError;
use crate::linalg;
use crate::model::Degree;
use crate::rng::Xoshiro256pp;
use crate::sets::{prox_linear, EuclideanBall, FeasibleSet};
use crate::trace::{RunResult, Termination};

type PairFn = Box<dyn Fn(&[f64]) -> (f64, Vec<f64>)>;
type ScalarFn = Box<dyn Fn(&[f64]) -> f64>;

/// A two-sided strongly convex inexact oracle of degree `q`.
pub struct StrongOracle {
    eval: PairFn,
    pub delta: f64,
    pub l: f64,
    pub mu: f64,
    pub degree: Degree,
    pub exact_f: Option<ScalarFn>,
}

impl StrongOracle {
    pub fn new(
        eval: PairFn,
        delta: f64,
        l: f64,
        mu: f64,
        degree: Degree,
        exact_f: Option<ScalarFn>,
    ) -> Result<Self, CoreError> {
        if delta < 0.0 {
            return Err(CoreError::invalid("delta", "must be nonnegative"));
        }
        if !(mu > 0.0) {
            return Err(CoreError::invalid("mu", "must be positive"));
        }
        if !(l >= mu) {
            return Err(CoreError::invalid("L", "must be at least mu"));
        }
        Ok(Self {
            eval,
            delta,
            l,
            mu,
            degree,
            exact_f,
        })
    }

    pub fn evaluate(&self, y: &[f64]) -> (f64, Vec<f64>) {
        (self.eval)(y)
    }

    /// Exact oracle for the diagonal quadratic `f(x) = ½·Σ dᵢxᵢ²`,
    /// declared with `μ = min d`, `L = max d`.
    pub fn exact_diagonal_quadratic(diag: Vec<f64>, degree: Degree) -> Result<Self, CoreError> {
        let mu = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let l = diag.iter().cloned().fold(0.0, f64::max);
        let d_eval = diag.clone();
        let d_exact = diag;
        Self::new(
            Box::new(move |y| {
                let g: Vec<f64> = y.iter().zip(&d_eval).map(|(x, d)| d * x).collect();
                let f = 0.5 * y.iter().zip(&d_eval).map(|(x, d)| d * x * x).sum::<f64>();
                (f, g)
            }),
            0.0,
            l,
            mu,
            degree,
            Some(Box::new(move |x| {
                0.5 * x.iter().zip(&d_exact).map(|(v, d)| d * v * v).sum::<f64>()
            })),
        )
    }

    /// Noisy oracle for the same diagonal quadratic on a ball.
    ///
    /// The two-sided sandwich leaves no room for gradient noise at interior
    /// points: any fixed perturbation breaks the `μ`-lower bound for `x`
    /// close to `y` because a linear term beats the quadratic there. On the
    /// boundary the normal cone opens up: a perturbation along the outward
    /// normal satisfies `⟨e, x − y⟩ ≤ 0` for every feasible `x`, so the
    /// lower bound survives and the upper bound only needs `‖e‖ ≤ δ`
    /// (for `q = 1`). The realized noise is therefore `fraction·δ` times
    /// the outward normal at boundary queries and zero at interior ones.
    pub fn noisy_diagonal_quadratic_on_ball(
        diag: Vec<f64>,
        ball: &EuclideanBall,
        delta: f64,
        degree: Degree,
        seed: u64,
        fraction: f64,
    ) -> Result<Self, CoreError> {
        if degree.value() != 1.0 {
            return Err(CoreError::invalid(
                "q",
                "the boundary-noise construction is certified for q = 1",
            ));
        }
        let mu = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let l = diag.iter().cloned().fold(0.0, f64::max);
        let d_eval = diag.clone();
        let d_exact = diag;
        let center = ball.center().to_vec();
        let radius = ball.radius();
        let rng = RefCell::new(Xoshiro256pp::seed_from_u64(seed));
        Self::new(
            Box::new(move |y| {
                let mut g: Vec<f64> = y.iter().zip(&d_eval).map(|(x, d)| d * x).collect();
                let f = 0.5 * y.iter().zip(&d_eval).map(|(x, d)| d * x * x).sum::<f64>();
                let off = linalg::sub(y, &center);
                let dist = linalg::norm(&off);
                if dist >= radius * (1.0 - 1e-12) && dist > 0.0 {
                    // Outward normal direction; magnitude drawn as a
                    // fraction of the certified budget.
                    let s = fraction * delta * rng.borrow_mut().next_f64();
                    g = linalg::axpy(&g, s / dist, &off);
                }
                (f, g)
            }),
            delta,
            l,
            mu,
            degree,
            Some(Box::new(move |x| {
                0.5 * x.iter().zip(&d_exact).map(|(v, d)| d * v * v).sum::<f64>()
            })),
        )
    }
}

/// Runs the fixed-step inexact gradient method:
/// `x_{k+1} = argmin_{x∈set} ⟨g_k, x − x_k⟩ + (L/2)‖x − x_k‖²`.
///
/// The reported point after `k` iterations is the iterate with the smallest
/// objective among `x_0 … x_{k−1}` (exact values when available, oracle
/// values otherwise; ties break to the smallest index).
pub fn run_strong_gm(
    oracle: &StrongOracle,
    set: &dyn FeasibleSet,
    x0: &[f64],
    iters: usize,
) -> Result<RunResult, CoreError> {
    if !set.contains(x0) {
        return Err(CoreError::InfeasibleStart);
    }
    let mut result = RunResult::new(x0.to_vec());
    result.f_hat_is_exact = oracle.exact_f.is_some();
    result.step_norms = Some(Vec::new());

    let f_of = |x: &[f64], oracle_value: f64| -> f64 {
        match &oracle.exact_f {
            Some(f) => f(x),
            None => oracle_value,
        }
    };

    let mut x = x0.to_vec();
    let (f0, mut g) = oracle.evaluate(&x);
    result.oracle_calls += 1;
    // Pool of candidates for the best-iterate rule; after iteration k the
    // history records f̂_{k+1} = min f over x_0 … x_k, and the final output
    // pools x_0 … x_{iters−1} (the new iterate joins only at the next step).
    let mut best_f = f_of(&x, f0);
    let mut best_x = x.clone();
    let mut output = best_x.clone();

    for _ in 0..iters {
        let x_next = prox_linear(&g, &x, oracle.l, set)?;
        result
            .step_norms
            .as_mut()
            .unwrap()
            .push(linalg::dist(&x_next, &x));
        let (f_next, g_next) = oracle.evaluate(&x_next);
        result.oracle_calls += 1;

        result.f_hat_history.push(best_f);
        result.l_history.push(oracle.l);
        result.line_search_counts.push(1);
        result.delta_history.push(oracle.delta);
        result.iterates.push(x_next.clone());
        result.calls_history.push(result.oracle_calls);
        output = best_x.clone();

        let f_candidate = f_of(&x_next, f_next);
        if f_candidate < best_f {
            best_f = f_candidate;
            best_x = x_next.clone();
        }

        x = x_next;
        g = g_next;
    }

    result.output_point = output;
    result.termination = Termination::MaxIters;
    Ok(result)
}

/// Gap bound for the best iterate after `k` iterations:
/// `(L·r₀²/2)·e^{−kμ/L} + δ·Σ_{i=0}^{k−1} (1−μ/L)^i·‖x_{k−i} − x_{k−1−i}‖^q`,
/// with `step_norms[j] = ‖x_{j+1} − x_j‖`.
pub fn strong_bound(
    k: usize,
    l: f64,
    mu: f64,
    r0: f64,
    delta: f64,
    q: Degree,
    step_norms: &[f64],
) -> Result<f64, CoreError> {
    if k < 1 {
        return Err(CoreError::invalid("k", "must be at least 1"));
    }
    if step_norms.len() < k {
        return Err(CoreError::invalid(
            "step_norms",
            format!("need at least {k} recorded steps, got {}", step_norms.len()),
        ));
    }
    let qv = q.value();
    let ratio = 1.0 - mu / l;
    let mut delta_sum = 0.0;
    for i in 0..k {
        delta_sum += ratio.powi(i as i32) * step_norms[k - 1 - i].powf(qv);
    }
    Ok(0.5 * l * r0 * r0 * (-(k as f64) * mu / l).exp() + delta * delta_sum)
}
