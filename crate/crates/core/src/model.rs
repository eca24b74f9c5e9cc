//! The higher-degree inexact model and its oracle constructors.
//!
//! A model of degree `q` of `f` at a center `y` is a pair
//! `(f_center, ψ(·))` with `ψ` convex, `ψ(y) = 0`, and
//!
//! ```text
//! f(x) − f_center − ψ(x) ≤ (L/2)‖x − y‖² + δ‖x − y‖^q      for all x,
//! ```
//!
//! optionally two-sided (`≥ 0` on the left) when the model lower-bounds a
//! convex `f`. The degree `q ∈ [0, 2)` controls how fast the `δ` error
//! vanishes near the center; `q = 0` recovers the classical constant-error
//! oracle.
//!
//! Four constructions are provided: relative gradient noise, absolute
//! gradient noise, evaluation at shifted points, and exact subgradients of
//! Hölder-smooth functions. All noise is drawn from a seeded stream at the
//! worst admissible magnitude by default.

use std::cell::RefCell;

use crate::error::CoreError;
use crate::linalg;
use crate::rng::Xoshiro256pp;
use crate::sets::FeasibleSet;

/// Model degree `q ∈ [0, 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Degree(f64);

impl Degree {
    pub fn new(q: f64) -> Result<Self, CoreError> {
        if !(0.0..2.0).contains(&q) {
            return Err(CoreError::invalid("q", format!("{q} is outside [0, 2)")));
        }
        Ok(Self(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `ψ` value contract of a general model.
pub type PsiFn = Box<dyn Fn(&[f64]) -> f64>;
/// Prox contract of a general model:
/// `(anchor, weight, set) ↦ argmin_{x∈set} ψ(x) + (weight/2)‖x−anchor‖²`.
pub type ModelProxFn = Box<dyn Fn(&[f64], f64, &dyn FeasibleSet) -> Result<Vec<f64>, CoreError>>;

/// The shape of the model term `ψ(·, y)`.
pub enum ModelForm {
    /// `ψ(x) = ⟨g, x − center⟩`.
    Linear(Vec<f64>),
    /// Black-box convex `ψ` with its own prox contract.
    General { psi: PsiFn, prox: ModelProxFn },
}

/// One model evaluation: the pair `(f_center, ψ(·))` at a center point,
/// together with the error `δ` certified at that center.
pub struct ModelEvaluation {
    pub center: Vec<f64>,
    pub f_center: f64,
    pub delta_at_center: f64,
    pub degree: Degree,
    pub form: ModelForm,
}

impl ModelEvaluation {
    /// Linear model `ψ(x) = ⟨g, x − center⟩`.
    pub fn linear(
        center: Vec<f64>,
        f_center: f64,
        g: Vec<f64>,
        delta: f64,
        degree: Degree,
    ) -> Self {
        Self {
            center,
            f_center,
            delta_at_center: delta,
            degree,
            form: ModelForm::Linear(g),
        }
    }

    /// Evaluates `ψ(x)`. Zero at the center by construction.
    pub fn psi(&self, x: &[f64]) -> f64 {
        match &self.form {
            ModelForm::Linear(g) => linalg::dot(g, x) - linalg::dot(g, &self.center),
            ModelForm::General { psi, .. } => psi(x),
        }
    }

    /// Model gradient when the form is linear.
    pub fn gradient(&self) -> Option<&[f64]> {
        match &self.form {
            ModelForm::Linear(g) => Some(g),
            ModelForm::General { .. } => None,
        }
    }

    /// `argmin_{x∈set} ψ(x) + (weight/2)‖x − anchor‖²`: closed form for
    /// linear models, the embedded contract otherwise.
    pub fn prox(
        &self,
        anchor: &[f64],
        weight: f64,
        set: &dyn FeasibleSet,
    ) -> Result<Vec<f64>, CoreError> {
        match &self.form {
            ModelForm::Linear(g) => crate::sets::prox_linear(g, anchor, weight, set),
            ModelForm::General { prox, .. } => prox(anchor, weight, set),
        }
    }
}

/// How the oracle's `δ` behaves across centers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaRule {
    /// The same `δ` at every center.
    Constant(f64),
    /// `δ` is produced per evaluation (read it from
    /// [`ModelEvaluation::delta_at_center`]).
    PointDependent,
}

/// Hölder certificate `‖∇f(x) − ∇f(y)‖ ≤ L_ν ‖x − y‖^ν` carried by
/// subgradient oracles, used to recompute the admissible `L(δ)`.
#[derive(Clone, Copy, Debug)]
pub struct HolderCert {
    pub nu: f64,
    pub l_nu: f64,
}

type EvalFn = Box<dyn Fn(&[f64]) -> ModelEvaluation>;
type ScalarFn = Box<dyn Fn(&[f64]) -> f64>;

/// A procedure producing degree-`q` model evaluations at query points.
///
/// An oracle owns its noise stream; use one instance per run. Distinct
/// instances are independent and may run in parallel.
pub struct InexactOracle {
    eval: EvalFn,
    pub degree: Degree,
    pub delta_rule: DeltaRule,
    /// True when the two-sided (convex) model inequality is guaranteed;
    /// false when only the one-sided upper bound is certified, as for
    /// gradient-noise oracles.
    pub lower_bound_holds: bool,
    /// Certified smoothness constant: the upper model inequality holds with
    /// this `L` together with the oracle's `(δ, q)`.
    pub l_valid: f64,
    /// Exact objective values for diagnostics, when available.
    pub exact_f: Option<ScalarFn>,
    /// Hölder certificate for subgradient oracles.
    pub holder: Option<HolderCert>,
}

impl InexactOracle {
    pub fn evaluate(&self, y: &[f64]) -> ModelEvaluation {
        (self.eval)(y)
    }

    pub fn exact_f(&self, x: &[f64]) -> Option<f64> {
        self.exact_f.as_ref().map(|f| f(x))
    }
}

/// Collapses the degree-`q` error term to a degree-0 one via Young's
/// inequality: for every `r ≥ 0`,
/// `δ·r^q ≤ (qρ/2)·r² + δ̂` with the returned `(qρ, δ̂)`,
/// where `δ̂ = (2−q)·δ^{2/(2−q)} / (2·ρ^{q/(2−q)})`.
///
/// Returns `(L_increment, delta_hat)`: add the increment to `L` and use
/// `δ̂` as the constant error.
pub fn collapse_to_q0(delta: f64, q: Degree, rho: f64) -> Result<(f64, f64), CoreError> {
    if !(rho > 0.0) {
        return Err(CoreError::invalid("rho", "must be positive"));
    }
    if delta < 0.0 {
        return Err(CoreError::invalid("delta", "must be nonnegative"));
    }
    let q = q.value();
    let increment = q * rho;
    let delta_hat = (2.0 - q) * delta.powf(2.0 / (2.0 - q)) / (2.0 * rho.powf(q / (2.0 - q)));
    Ok((increment, delta_hat))
}

/// Smoothness constant `L(δ)` for a Hölder-smooth function
/// (`‖∇f(x) − ∇f(y)‖ ≤ L_ν‖x−y‖^ν`), such that
/// `(L_ν/(1+ν))‖x−y‖^{1+ν} ≤ (L(δ)/2)‖x−y‖² + δ‖x−y‖^q`.
///
/// With `certified = false` this returns the literature formula
/// `((1+ν−q)/(2−q))·(L_ν/(1+ν))^{(2−q)/(1+ν−q)}·((1−ν)/(δ(2−q)))^{(1−ν)/(1+ν−q)}`.
/// That value is too small by a factor of two: maximizing
/// `2·((L_ν/(1+ν))r^{1+ν} − δr^q)/r²` over `r > 0` (stationary point
/// `r* = [δ(2−q)/((L_ν/(1+ν))(1−ν))]^{1/(1+ν−q)}`) yields exactly twice it.
/// `certified = true` returns that minimal admissible constant, which
/// solvers should use. At `ν = 1` the `(1−ν)`-power factor is taken as 1,
/// making the certified value `L_1` for any `δ`.
pub fn holder_l(delta: f64, nu: f64, q: f64, l_nu: f64, certified: bool) -> Result<f64, CoreError> {
    if !(delta > 0.0) {
        return Err(CoreError::invalid("delta", "must be positive"));
    }
    if !(0.0..=1.0).contains(&nu) {
        return Err(CoreError::invalid("nu", "must lie in [0, 1]"));
    }
    if !(q >= 0.0 && q < 1.0 + nu) {
        return Err(CoreError::invalid("q", "must lie in [0, 1 + nu)"));
    }
    if !(l_nu > 0.0) {
        return Err(CoreError::invalid("l_nu", "must be positive"));
    }
    let base = l_nu / (1.0 + nu);
    let printed = if nu == 1.0 {
        // The (1−ν)-power factor degenerates to 0^0; by convention it is 1.
        base
    } else {
        ((1.0 + nu - q) / (2.0 - q))
            * base.powf((2.0 - q) / (1.0 + nu - q))
            * ((1.0 - nu) / (delta * (2.0 - q))).powf((1.0 - nu) / (1.0 + nu - q))
    };
    Ok(if certified { 2.0 * printed } else { printed })
}

/// Worst-case-by-default noise realization: a direction drawn uniformly on
/// the unit sphere from a seeded stream, with magnitude equal to `fraction`
/// of the admissible bound.
#[derive(Clone, Copy, Debug)]
pub struct Perturbation {
    pub seed: u64,
    pub fraction: f64,
}

impl Perturbation {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            fraction: 1.0,
        }
    }

    pub fn with_fraction(seed: u64, fraction: f64) -> Result<Self, CoreError> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(CoreError::invalid("fraction", "must lie in [0, 1]"));
        }
        Ok(Self { seed, fraction })
    }
}

/// Oracle with relative gradient noise:
/// `‖∇̃f(y) − ∇f(y)‖ ≤ α‖∇f(y)‖`. The model is the linearization at the
/// corrupted gradient with `δ(y) = (α/(1−α))·‖∇̃f(y)‖`, `q = 1`, `L = L_f`.
pub fn make_relative_noise_oracle<G, F>(
    grad: G,
    f: F,
    l_f: f64,
    alpha: f64,
    perturbation: Perturbation,
) -> Result<InexactOracle, CoreError>
where
    G: Fn(&[f64]) -> Vec<f64> + 'static,
    F: Fn(&[f64]) -> f64 + Clone + 'static,
{
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CoreError::invalid("alpha", "must lie in (0, 1)"));
    }
    let degree = Degree::new(1.0)?;
    let rng = RefCell::new(Xoshiro256pp::seed_from_u64(perturbation.seed));
    let fraction = perturbation.fraction;
    let f_for_eval = f.clone();
    let eval = Box::new(move |y: &[f64]| {
        let g_exact = grad(y);
        let bound = alpha * linalg::norm(&g_exact);
        let g_noisy = if bound > 0.0 {
            let dir = rng.borrow_mut().unit_vector(y.len());
            linalg::axpy(&g_exact, fraction * bound, &dir)
        } else {
            // Zero gradient forces zero noise.
            g_exact
        };
        let delta = alpha / (1.0 - alpha) * linalg::norm(&g_noisy);
        ModelEvaluation::linear(y.to_vec(), f_for_eval(y), g_noisy, delta, degree)
    });
    Ok(InexactOracle {
        eval,
        degree,
        delta_rule: DeltaRule::PointDependent,
        lower_bound_holds: false,
        l_valid: l_f,
        exact_f: Some(Box::new(f)),
        holder: None,
    })
}

/// Oracle with absolute gradient noise: `g = ∇f(y) + e`, `‖e‖ ≤ Δ`.
/// Certified `(δ, L, q) = (Δ, L_f, 1)`.
pub fn make_absolute_noise_oracle<G, F>(
    grad: G,
    f: F,
    l_f: f64,
    delta_cap: f64,
    perturbation: Perturbation,
) -> Result<InexactOracle, CoreError>
where
    G: Fn(&[f64]) -> Vec<f64> + 'static,
    F: Fn(&[f64]) -> f64 + Clone + 'static,
{
    if delta_cap < 0.0 {
        return Err(CoreError::invalid("Delta", "must be nonnegative"));
    }
    let degree = Degree::new(1.0)?;
    let rng = RefCell::new(Xoshiro256pp::seed_from_u64(perturbation.seed));
    let fraction = perturbation.fraction;
    let f_for_eval = f.clone();
    let eval = Box::new(move |y: &[f64]| {
        let g_exact = grad(y);
        let g_noisy = if delta_cap > 0.0 {
            let dir = rng.borrow_mut().unit_vector(y.len());
            linalg::axpy(&g_exact, fraction * delta_cap, &dir)
        } else {
            g_exact
        };
        ModelEvaluation::linear(y.to_vec(), f_for_eval(y), g_noisy, delta_cap, degree)
    });
    Ok(InexactOracle {
        eval,
        degree,
        delta_rule: DeltaRule::Constant(delta_cap),
        lower_bound_holds: delta_cap == 0.0,
        l_valid: l_f,
        exact_f: Some(Box::new(f)),
        holder: None,
    })
}

/// Oracle evaluating the exact gradient at a shifted point `ŷ` with
/// `‖ŷ − y‖ ≤ Δ`. Certified `(δ, L, q) = (Δ·L_f, L_f, 1)`.
pub fn make_shifted_point_oracle<G, F>(
    grad: G,
    f: F,
    l_f: f64,
    delta_cap: f64,
    shift: Perturbation,
) -> Result<InexactOracle, CoreError>
where
    G: Fn(&[f64]) -> Vec<f64> + 'static,
    F: Fn(&[f64]) -> f64 + Clone + 'static,
{
    if delta_cap < 0.0 {
        return Err(CoreError::invalid("Delta", "must be nonnegative"));
    }
    let degree = Degree::new(1.0)?;
    let rng = RefCell::new(Xoshiro256pp::seed_from_u64(shift.seed));
    let fraction = shift.fraction;
    let f_for_eval = f.clone();
    let eval = Box::new(move |y: &[f64]| {
        let shifted = if delta_cap > 0.0 {
            let dir = rng.borrow_mut().unit_vector(y.len());
            linalg::axpy(y, fraction * delta_cap, &dir)
        } else {
            y.to_vec()
        };
        ModelEvaluation::linear(
            y.to_vec(),
            f_for_eval(y),
            grad(&shifted),
            delta_cap * l_f,
            degree,
        )
    });
    Ok(InexactOracle {
        eval,
        degree,
        delta_rule: DeltaRule::Constant(delta_cap * l_f),
        lower_bound_holds: delta_cap == 0.0,
        l_valid: l_f,
        exact_f: Some(Box::new(f)),
        holder: None,
    })
}

/// Exact-subgradient model for a Hölder-smooth convex function. The model
/// is two-sided (convexity supplies the lower bound) and is certified with
/// `L = holder_l(δ, ν, q, L_ν, certified = true)` for any declared `δ > 0`.
///
/// When the declared `δ` is zero the certificate degenerates: `L_valid` is
/// `L_1` for `ν = 1` and unbounded otherwise (callers relying on a
/// per-iteration `δ` schedule recompute `L(δ_k)` from the [`HolderCert`]).
pub fn make_holder_oracle<G, F>(
    subgrad: G,
    f: F,
    l_nu: f64,
    nu: f64,
    delta: f64,
    q: Degree,
) -> Result<InexactOracle, CoreError>
where
    G: Fn(&[f64]) -> Vec<f64> + 'static,
    F: Fn(&[f64]) -> f64 + Clone + 'static,
{
    if !(0.0..=1.0).contains(&nu) {
        return Err(CoreError::invalid("nu", "must lie in [0, 1]"));
    }
    if q.value() >= 1.0 + nu {
        return Err(CoreError::invalid("q", "must be below 1 + nu"));
    }
    if delta < 0.0 {
        return Err(CoreError::invalid("delta", "must be nonnegative"));
    }
    let l_valid = if delta > 0.0 {
        holder_l(delta, nu, q.value(), l_nu, true)?
    } else if nu == 1.0 {
        l_nu
    } else {
        f64::INFINITY
    };
    let f_for_eval = f.clone();
    let eval = Box::new(move |y: &[f64]| {
        ModelEvaluation::linear(y.to_vec(), f_for_eval(y), subgrad(y), delta, q)
    });
    Ok(InexactOracle {
        eval,
        degree: q,
        delta_rule: DeltaRule::Constant(delta),
        lower_bound_holds: true,
        l_valid,
        exact_f: Some(Box::new(f)),
        holder: Some(HolderCert { nu, l_nu }),
    })
}

/// Wraps a black-box model evaluation into an oracle (general-`ψ` escape
/// hatch; the evaluation must carry its own prox contract).
pub fn make_general_oracle<E>(
    eval: E,
    degree: Degree,
    delta_rule: DeltaRule,
    lower_bound_holds: bool,
    l_valid: f64,
    exact_f: Option<ScalarFn>,
) -> InexactOracle
where
    E: Fn(&[f64]) -> ModelEvaluation + 'static,
{
    InexactOracle {
        eval: Box::new(eval),
        degree,
        delta_rule,
        lower_bound_holds,
        l_valid,
        exact_f,
        holder: None,
    }
}
