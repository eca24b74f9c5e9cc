//! qopt: first-order convex optimization with higher-degree inexact oracles.
//!
//! The crate is built around a single abstraction: a per-point model of the
//! objective whose approximation error is `(L/2)‖x−y‖² + δ‖x−y‖^q` with a
//! degree `q ∈ [0, 2)`. Larger `q` makes the error vanish faster near the
//! model center, so methods driven by such models lose less accuracy to
//! oracle noise than the classical `q = 0` setting.
//!
//! On top of that abstraction the crate provides:
//!
//! - [`model`] — the degree-`q` model types and oracle constructors
//!   (relative / absolute gradient noise, shifted-point evaluation,
//!   Hölder-smooth subgradient models).
//! - [`sets`] — Euclidean feasible sets with projection and the linear-model
//!   prox step shared by every solver.
//! - [`gm`] — adaptive inexact gradient method with doubling line search.
//! - [`fgm`] — adaptive inexact fast gradient method, restart scheme for
//!   strongly convex problems, and the universal variant with a
//!   per-iteration error budget.
//! - [`strong`] — non-adaptive gradient method for two-sided
//!   strongly convex oracles with a linear-rate bound reporter.
//! - [`vi`] — generalized Mirror Prox for variational inequalities and
//!   saddle-point problems.
//! - [`subgrad`] — projected subgradient baselines with eight classical
//!   step-size rules.
//! - [`problems`] — non-smooth geometric test problems (best approximation,
//!   Fermat–Torricelli–Steiner) with seeded generators and reference values.
//! - [`trace`] — the run trace shared by all solvers and its CSV encoding.
//!
//! Every stochastic component is seeded explicitly (xoshiro256++, see
//! [`rng`]); identical inputs reproduce runs bit-exactly.

// `!(x > 0.0)` rejects NaN along with nonpositive values; the suggested
// rewrite loses that.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::too_many_arguments)]

pub mod error;
pub mod fgm;
pub mod gm;
pub mod linalg;
pub mod model;
pub mod problems;
pub mod rng;
pub mod sets;
pub mod strong;
pub mod subgrad;
pub mod trace;
pub mod vi;

pub use error::CoreError;
pub use fgm::{
    epsilon_of_q, fgm_bound, run_adaptive_fgm, run_restarted_fgm, solve_alpha,
    universal_complexity_bound, DeltaSchedule,
};
pub use gm::{gm_bound, run_adaptive_gm, GmConfig};
pub use model::{
    collapse_to_q0, holder_l, make_absolute_noise_oracle, make_holder_oracle,
    make_relative_noise_oracle, make_shifted_point_oracle, Degree, DeltaRule, InexactOracle,
    ModelEvaluation, Perturbation,
};
pub use problems::{
    generate_best_approx, generate_fts, reference_fmin, BestApproximation, FermatTorricelliSteiner,
    Problem, ReferenceValue,
};
pub use sets::{prox_linear, prox_model, BoxSet, EuclideanBall, FeasibleSet, ProductSet};
pub use strong::{run_strong_gm, strong_bound, StrongOracle};
pub use subgrad::{run_projected_subgradient, step_size, StepRule};
pub use trace::{RunResult, Termination};
pub use vi::{
    run_mirror_prox, saddle_gap, saddle_to_vi, saddle_to_vi_biased, vi_bound, SaddleProblem,
    SaddleVi, ViModel,
};

/// Relative slack admitted when testing a line-search acceptance inequality.
///
/// Exact-arithmetic equality cases (they do occur on synthetic quadratics)
/// must not be rejected because of the last floating-point bit. The slack is
/// scaled by the magnitude of both sides; anything it lets through is orders
/// of magnitude below the 1e-9 tolerances of the bound envelopes.
pub const ACCEPTANCE_SLACK: f64 = 1e-12;

/// Halvings below the initial constant at which line-search trials floor
/// out, i.e. trials never go below `L0·2⁻⁵⁰`.
///
/// At a fixed point every first trial is accepted, so the constant halves
/// each iteration; without a floor the `1/L` accumulators eventually
/// overflow, and an absolute floor near the denormal range would leave the
/// doubling search unable to climb back within its cap once acceptance
/// fails again. Fifty halvings keep both recovery (within the default cap
/// of 60) and the weights (`1/L ≤ 2⁵⁰/L0`) well-behaved.
pub const L_FLOOR_HALVINGS: i32 = 50;

/// Smallest line-search trial constant for the given initial `L0`.
pub fn l_trial_floor(l0: f64) -> f64 {
    l0 * 2.0_f64.powi(-L_FLOOR_HALVINGS)
}
