//! Generalized Mirror Prox for variational inequalities with a degree-`q`
//! model, and the saddle-point adapter.
//!
//! A variational inequality asks for `x_*` with `ψ(x, x_*) ≥ 0` for all
//! feasible `x`. The model `ψ_{δ,L,q}` relaxes monotonicity and the
//! smoothness triangle inequality by `δ‖·‖^q` terms; the solver takes a
//! prediction step `w_k` and a correction step `z_{k+1}` per iteration,
//! doubling the constant until the triangle acceptance inequality holds,
//! and outputs the `1/L`-weighted average of the predictions.
//!
//! For corrupted operator models, the pairing is: the solver's steps and
//! acceptance test use the corrupted operator's `ψ_{δ,L,q}`, while the
//! target `ψ(x, y) = ⟨g_true(y), x − y⟩` (and hence gap reporting) uses
//! the uncorrupted one; the model-consistency property
//! `ψ ≤ ψ_{δ,L,q} + δ‖x−y‖^q` ties the two together.

use crate::error::CoreError;
use crate::linalg;
use crate::model::Degree;
use crate::rng::Xoshiro256pp;
use crate::sets::{prox_linear, FeasibleSet, ProductSet};
use crate::trace::{RunResult, Termination};
use crate::{l_trial_floor, ACCEPTANCE_SLACK};

type OperatorFn = Box<dyn Fn(&[f64]) -> Vec<f64>>;
type PsiFn = Box<dyn Fn(&[f64], &[f64]) -> f64>;
type ProxFn = Box<dyn Fn(&[f64], &[f64], f64, &dyn FeasibleSet) -> Result<Vec<f64>, CoreError>>;
type BivariateFn = Box<dyn Fn(&[f64], &[f64]) -> f64>;
type GradFn = Box<dyn Fn(&[f64], &[f64]) -> Vec<f64>>;

/// The model form behind a [`ViModel`].
enum ViForm {
    /// `ψ(x, y) = ⟨g(y), x − y⟩` for an operator `g`; the prox step is the
    /// linear one. An optional `true_g` carries the uncorrupted operator
    /// for gap reporting.
    Operator {
        g: OperatorFn,
        true_g: Option<OperatorFn>,
    },
    /// Black-box `ψ` with its own prox contract
    /// `(center y, anchor z, weight) ↦ argmin_x ψ(x, y) + (w/2)‖x − z‖²`.
    General { psi: PsiFn, prox: ProxFn },
}

/// A degree-`q` model for variational inequalities: convex in its first
/// argument, zero on the diagonal, `(δ, q)`-monotone, and satisfying the
/// triangle smoothness inequality exercised by the solver's acceptance
/// test. `δ` is a constant here (point-dependent `δ` is not supported for
/// VI models).
pub struct ViModel {
    form: ViForm,
    pub delta: f64,
    pub degree: Degree,
}

impl ViModel {
    /// Model induced by an operator `g`: `ψ(x, y) = ⟨g(y), x − y⟩`.
    pub fn operator<G>(g: G, delta: f64, degree: Degree) -> Result<Self, CoreError>
    where
        G: Fn(&[f64]) -> Vec<f64> + 'static,
    {
        if delta < 0.0 {
            return Err(CoreError::invalid("delta", "must be nonnegative"));
        }
        Ok(Self {
            form: ViForm::Operator {
                g: Box::new(g),
                true_g: None,
            },
            delta,
            degree,
        })
    }

    /// Operator model with a systematic-bias corruption: a fixed offset of
    /// norm at most `noise_cap` per instance, drawn once from the seed.
    /// A constant offset keeps the model exactly `(δ, q)`-monotone
    /// (the offsets cancel in `ψ(x,y) + ψ(y,x)`) and costs
    /// `δ = noise_cap` in the model-consistency property, with `q = 1`.
    pub fn operator_with_bias<G>(
        g: G,
        dim: usize,
        noise_cap: f64,
        seed: u64,
        degree: Degree,
    ) -> Result<Self, CoreError>
    where
        G: Fn(&[f64]) -> Vec<f64> + Clone + 'static,
    {
        if noise_cap < 0.0 {
            return Err(CoreError::invalid("noise_cap", "must be nonnegative"));
        }
        let mut rng = Xoshiro256pp::seed_from_u64(seed);
        let offset = linalg::scale(&rng.unit_vector(dim), noise_cap);
        let g_true = g.clone();
        Ok(Self {
            form: ViForm::Operator {
                g: Box::new(move |y| linalg::add(&g(y), &offset)),
                true_g: Some(Box::new(move |y| g_true(y))),
            },
            delta: noise_cap,
            degree,
        })
    }

    /// Black-box model with an explicit prox contract.
    pub fn general<P, X>(psi: P, prox: X, delta: f64, degree: Degree) -> Result<Self, CoreError>
    where
        P: Fn(&[f64], &[f64]) -> f64 + 'static,
        X: Fn(&[f64], &[f64], f64, &dyn FeasibleSet) -> Result<Vec<f64>, CoreError> + 'static,
    {
        if delta < 0.0 {
            return Err(CoreError::invalid("delta", "must be nonnegative"));
        }
        Ok(Self {
            form: ViForm::General {
                psi: Box::new(psi),
                prox: Box::new(prox),
            },
            delta,
            degree,
        })
    }

    /// Evaluates `ψ(x, y)` (model value; for operator forms this queries
    /// the possibly corrupted operator at `y`).
    pub fn psi(&self, x: &[f64], y: &[f64]) -> f64 {
        match &self.form {
            ViForm::Operator { g, .. } => {
                let gy = g(y);
                linalg::dot(&gy, x) - linalg::dot(&gy, y)
            }
            ViForm::General { psi, .. } => psi(x, y),
        }
    }

    /// `argmin_{x∈set} ψ(x, center) + (weight/2)‖x − anchor‖²`.
    pub fn prox_step(
        &self,
        center: &[f64],
        anchor: &[f64],
        weight: f64,
        set: &dyn FeasibleSet,
    ) -> Result<Vec<f64>, CoreError> {
        match &self.form {
            ViForm::Operator { g, .. } => prox_linear(&g(center), anchor, weight, set),
            ViForm::General { prox, .. } => prox(center, anchor, weight, set),
        }
    }

    /// Linearized gap `max_{u∈set} ⟨g(ŵ), ŵ − u⟩` for operator models:
    /// the exact weak gap for skew linear operators and an upper bound for
    /// monotone ones. Uses the uncorrupted operator when available.
    pub fn linearized_gap(&self, w_hat: &[f64], set: &dyn FeasibleSet) -> Option<f64> {
        match &self.form {
            ViForm::Operator { g, true_g } => {
                let gw = match true_g {
                    Some(t) => t(w_hat),
                    None => g(w_hat),
                };
                let u = set.max_linear(&linalg::scale(&gw, -1.0));
                Some(linalg::dot(&gw, &linalg::sub(w_hat, &u)))
            }
            ViForm::General { .. } => None,
        }
    }
}

/// Runs Generalized Mirror Prox from `z0`.
///
/// Stops when `S_N = Σ 1/L_{k+1} ≥ D/(2ε)` with
/// `D = set.diameter_sq_from(z0)` (certifying a weak gap of at most `ε`),
/// or when `max_iters` is exhausted, in which case the result is returned
/// with [`Termination::BudgetExceeded`].
pub fn run_mirror_prox(
    model: &ViModel,
    set: &dyn FeasibleSet,
    z0: &[f64],
    eps: f64,
    l0: f64,
    max_iters: usize,
) -> Result<RunResult, CoreError> {
    if !set.contains(z0) {
        return Err(CoreError::InfeasibleStart);
    }
    if !(eps > 0.0) {
        return Err(CoreError::invalid("eps", "must be positive"));
    }
    if !(l0 > 0.0) {
        return Err(CoreError::invalid("L0", "must be positive"));
    }
    let q = model.degree.value();
    let delta = model.delta;
    let diameter_sq = set.diameter_sq_from(z0);
    let s_threshold = diameter_sq / (2.0 * eps);
    let line_search_cap = 60;
    let l_floor = l_trial_floor(l0);

    let mut result = RunResult::new(z0.to_vec());
    result.s_history = Some(Vec::new());
    result.gap_history = Some(Vec::new());

    let mut z = z0.to_vec();
    let mut l_prev = l0;
    let mut s_total = 0.0;
    let mut weighted_w = vec![0.0; z.len()];
    result.termination = Termination::BudgetExceeded;

    for k in 0..max_iters {
        let mut l_trial = (0.5 * l_prev).max(l_floor);
        let mut trials = 0usize;
        let (w, z_next) = loop {
            trials += 1;
            if trials > line_search_cap {
                return Err(CoreError::LineSearchExhausted {
                    iteration: k,
                    cap: line_search_cap,
                });
            }
            let w = model.prox_step(&z, &z, l_trial, set)?;
            let z_next = model.prox_step(&w, &z, l_trial, set)?;
            let dwz = linalg::dist(&w, &z);
            let dwz_next = linalg::dist(&w, &z_next);
            let lhs = model.psi(&z_next, &z);
            let rhs = model.psi(&z_next, &w)
                + model.psi(&w, &z)
                + 0.5 * l_trial * (dwz * dwz + dwz_next * dwz_next)
                + 0.5 * delta * (dwz.powf(q) + dwz_next.powf(q));
            if lhs <= rhs + ACCEPTANCE_SLACK * (1.0 + lhs.abs() + rhs.abs()) {
                break (w, z_next);
            }
            l_trial *= 2.0;
        };

        s_total += 1.0 / l_trial;
        for (acc, wi) in weighted_w.iter_mut().zip(&w) {
            *acc += wi / l_trial;
        }
        let w_hat: Vec<f64> = weighted_w.iter().map(|v| v / s_total).collect();

        result.iterates.push(z_next.clone());
        result.l_history.push(l_trial);
        result.line_search_counts.push(trials);
        result.delta_history.push(delta);
        result.s_history.as_mut().unwrap().push(s_total);
        if let Some(gap) = model.linearized_gap(&w_hat, set) {
            result.gap_history.as_mut().unwrap().push(gap);
            result.f_hat_history.push(gap);
        } else {
            result.f_hat_history.push(f64::NAN);
        }
        // Distinct model centers queried: z_k once, plus one w per trial.
        result.oracle_calls += 1 + trials;
        result.calls_history.push(result.oracle_calls);

        z = z_next;
        l_prev = l_trial;

        if s_total >= s_threshold {
            result.termination = Termination::Certificate;
            break;
        }
    }

    result.output_point = if s_total > 0.0 {
        weighted_w.iter().map(|v| v / s_total).collect()
    } else {
        z.clone()
    };
    Ok(result)
}

/// Weak-gap bound after `N` iterations of Mirror Prox:
/// `LD/N + 3·(√(2D/3))^q·δ/N^{q/2}`.
pub fn vi_bound(n: usize, l: f64, d: f64, delta: f64, q: Degree) -> Result<f64, CoreError> {
    if n < 1 {
        return Err(CoreError::invalid("N", "must be at least 1"));
    }
    if !(d > 0.0) {
        return Err(CoreError::invalid("D", "must be positive"));
    }
    let qv = q.value();
    let n = n as f64;
    Ok(l * d / n + 3.0 * (2.0 * d / 3.0).sqrt().powf(qv) * delta / n.powf(qv / 2.0))
}

/// A convex-concave saddle-point problem `min_u max_v f(u, v)` on
/// `Q₁ × Q₂`.
pub struct SaddleProblem {
    pub f: BivariateFn,
    pub grad_u: GradFn,
    pub grad_v: GradFn,
    pub q1: Box<dyn FeasibleSet>,
    pub q2: Box<dyn FeasibleSet>,
    /// `(û, v̂) ↦ max_{v∈Q2} f(û, v) − min_{u∈Q1} f(u, v̂)` when a closed
    /// form exists.
    pub gap_evaluator: Option<BivariateFn>,
}

impl SaddleProblem {
    /// Bilinear game `f(u, v) = uᵀBv` on balls, with the closed-form gap
    /// `radius₂·‖Bᵀû‖ + radius₁·‖Bv̂‖`.
    pub fn bilinear_on_balls(
        b: Vec<Vec<f64>>,
        radius1: f64,
        radius2: f64,
    ) -> Result<Self, CoreError> {
        let n1 = b.len();
        if n1 == 0 {
            return Err(CoreError::invalid("B", "must be nonempty"));
        }
        let n2 = b[0].len();
        if b.iter().any(|row| row.len() != n2) {
            return Err(CoreError::invalid("B", "rows must have equal length"));
        }
        let b_f = b.clone();
        let b_gu = b.clone();
        let b_gv = b.clone();
        let b_gap = b;
        let bv = move |b: &[Vec<f64>], v: &[f64]| -> Vec<f64> {
            b.iter().map(|row| linalg::dot(row, v)).collect()
        };
        let btu = move |b: &[Vec<f64>], u: &[f64]| -> Vec<f64> {
            (0..b[0].len())
                .map(|j| b.iter().zip(u).map(|(row, ui)| row[j] * ui).sum())
                .collect()
        };
        Ok(Self {
            f: Box::new(move |u, v| {
                u.iter()
                    .zip(&b_f)
                    .map(|(ui, row)| ui * linalg::dot(row, v))
                    .sum()
            }),
            grad_u: Box::new(move |_, v| bv(&b_gu, v)),
            grad_v: Box::new(move |u, _| btu(&b_gv, u)),
            q1: Box::new(crate::sets::EuclideanBall::new(vec![0.0; n1], radius1)?),
            q2: Box::new(crate::sets::EuclideanBall::new(vec![0.0; n2], radius2)?),
            gap_evaluator: Some(Box::new(move |u_hat, v_hat| {
                radius2 * linalg::norm(&btu(&b_gap, u_hat))
                    + radius1 * linalg::norm(&bv(&b_gap, v_hat))
            })),
        })
    }
}

/// A saddle problem converted to VI form: the operator model, the product
/// feasible set, the first block's dimension for splitting outputs, and
/// the gap evaluator carried over from the problem.
pub struct SaddleVi {
    pub model: ViModel,
    pub set: ProductSet,
    pub n1: usize,
    pub gap_evaluator: Option<BivariateFn>,
}

impl SaddleVi {
    /// Duality gap of a concatenated point `(û, v̂)`.
    pub fn gap(&self, w_hat: &[f64]) -> Result<f64, CoreError> {
        let (u, v) = w_hat.split_at(self.n1);
        match &self.gap_evaluator {
            Some(eval) => Ok(eval(u, v)),
            None => Err(CoreError::MissingGapEvaluator),
        }
    }
}

/// Builds the VI operator model `G(u, v) = (∇_u f(u,v), −∇_v f(u,v))` over
/// `Q₁ × Q₂`. With `δ = 0` this is the exact monotone model for
/// convex-concave `f`; a caller-certified `(δ, q)` for corrupted gradients
/// is propagated unchanged.
pub fn saddle_to_vi(problem: SaddleProblem, delta: f64, q: Degree) -> Result<SaddleVi, CoreError> {
    saddle_to_vi_inner(problem, delta, q, None)
}

/// Like [`saddle_to_vi`] but corrupts each gradient block with a fixed
/// seeded offset of norm `noise_per_block`. The concatenated offset has
/// norm `noise_per_block·√2`, which is the certified model `δ` (with
/// `q = 1`); being constant, the offset cancels in the monotonicity sum,
/// so all model properties hold exactly at that `δ`.
pub fn saddle_to_vi_biased(
    problem: SaddleProblem,
    noise_per_block: f64,
    seed: u64,
    q: Degree,
) -> Result<SaddleVi, CoreError> {
    if noise_per_block < 0.0 {
        return Err(CoreError::invalid("noise_per_block", "must be nonnegative"));
    }
    let delta = noise_per_block * std::f64::consts::SQRT_2;
    saddle_to_vi_inner(problem, delta, q, Some((noise_per_block, seed)))
}

fn saddle_to_vi_inner(
    problem: SaddleProblem,
    delta: f64,
    q: Degree,
    bias: Option<(f64, u64)>,
) -> Result<SaddleVi, CoreError> {
    let SaddleProblem {
        f: _,
        grad_u,
        grad_v,
        q1,
        q2,
        gap_evaluator,
    } = problem;
    let n1 = q1.dim();
    let n2 = q2.dim();

    // Validate block dimensions with one probe evaluation at a feasible pair.
    let probe_u = q1.project(&vec![0.0; n1]);
    let probe_v = q2.project(&vec![0.0; n2]);
    if grad_u(&probe_u, &probe_v).len() != n1 {
        return Err(CoreError::DimensionMismatch {
            expected: n1,
            got: grad_u(&probe_u, &probe_v).len(),
        });
    }
    if grad_v(&probe_u, &probe_v).len() != n2 {
        return Err(CoreError::DimensionMismatch {
            expected: n2,
            got: grad_v(&probe_u, &probe_v).len(),
        });
    }

    let offset: Option<Vec<f64>> = bias.map(|(cap, seed)| {
        let mut rng = Xoshiro256pp::seed_from_u64(seed);
        let mut e = linalg::scale(&rng.unit_vector(n1), cap);
        e.extend(linalg::scale(&rng.unit_vector(n2), cap));
        e
    });

    let g_exact = move |x: &[f64]| -> Vec<f64> {
        let (u, v) = x.split_at(n1);
        let mut g = grad_u(u, v);
        g.extend(grad_v(u, v).iter().map(|t| -t));
        g
    };

    let model = match offset {
        None => ViModel::operator(g_exact, delta, q)?,
        Some(e) => {
            // The corrupted operator shares the exact one so the true
            // operator stays available for gap reporting.
            let g_shared = std::rc::Rc::new(g_exact);
            let g_true = g_shared.clone();
            ViModel {
                form: ViForm::Operator {
                    g: Box::new(move |y: &[f64]| linalg::add(&g_shared(y), &e)),
                    true_g: Some(Box::new(move |y: &[f64]| g_true(y))),
                },
                delta,
                degree: q,
            }
        }
    };

    Ok(SaddleVi {
        model,
        set: ProductSet::new(q1, q2),
        n1,
        gap_evaluator,
    })
}

/// Duality gap `max_{v∈Q2} f(û, v) − min_{u∈Q1} f(u, v̂)` of a feasible
/// pair, via the problem's gap evaluator. Nonnegative up to roundoff for
/// feasible pairs.
pub fn saddle_gap(problem: &SaddleProblem, u_hat: &[f64], v_hat: &[f64]) -> Result<f64, CoreError> {
    match &problem.gap_evaluator {
        Some(eval) => Ok(eval(u_hat, v_hat)),
        None => Err(CoreError::MissingGapEvaluator),
    }
}
