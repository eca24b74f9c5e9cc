//! Convex feasible sets with Euclidean projection and the prox step used by
//! every solver in the crate.
//!
//! Only the standard Euclidean geometry is supported. Balls are the primary
//! set; boxes and products are provided as utility extensions.

use crate::error::CoreError;
use crate::linalg;
use crate::model::ModelEvaluation;

/// Tolerance used by `contains` on constraint violation.
pub const CONTAINS_TOL: f64 = 1e-12;

/// A convex set supporting projection, membership and radius bounds.
///
/// Implementations must be immutable after construction; values are shared
/// freely across concurrent runs.
pub trait FeasibleSet: Send + Sync {
    /// Ambient dimension.
    fn dim(&self) -> usize;

    /// Euclidean projection onto the set.
    fn project(&self, x: &[f64]) -> Vec<f64>;

    /// Membership with tolerance [`CONTAINS_TOL`] on constraint violation.
    fn contains(&self, x: &[f64]) -> bool;

    /// An `R²` with `½‖x − y‖² ≤ R²` for all members `x, y`.
    fn radius_sq(&self) -> f64;

    /// A `D` with `max_{x∈set} ‖x − anchor‖² ≤ D` for the given anchor.
    fn diameter_sq_from(&self, anchor: &[f64]) -> f64;

    /// `argmax_{x∈set} ⟨c, x⟩`. The default runs 200 projected-gradient
    /// steps and is approximate; sets with a closed form override it.
    fn max_linear(&self, c: &[f64]) -> Vec<f64> {
        let mut x = self.project(&vec![0.0; self.dim()]);
        let step = 1.0 / (1.0 + linalg::norm(c));
        for _ in 0..200 {
            x = self.project(&linalg::axpy(&x, step, c));
        }
        x
    }
}

/// Euclidean ball `{x : ‖x − center‖ ≤ radius}`.
#[derive(Clone, Debug)]
pub struct EuclideanBall {
    center: Vec<f64>,
    radius: f64,
}

impl EuclideanBall {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self, CoreError> {
        if !(radius > 0.0) {
            return Err(CoreError::invalid("radius", "must be positive"));
        }
        Ok(Self { center, radius })
    }

    /// Unit ball centered at the origin of `ℝⁿ`.
    pub fn unit(n: usize) -> Self {
        Self {
            center: vec![0.0; n],
            radius: 1.0,
        }
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl FeasibleSet for EuclideanBall {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn project(&self, x: &[f64]) -> Vec<f64> {
        let d = linalg::sub(x, &self.center);
        let nrm = linalg::norm(&d);
        if nrm <= self.radius {
            x.to_vec()
        } else {
            linalg::axpy(&self.center, self.radius / nrm, &d)
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && linalg::dist(x, &self.center) <= self.radius + CONTAINS_TOL
    }

    fn radius_sq(&self) -> f64 {
        // ½(2ρ)² for the worst pair of members.
        2.0 * self.radius * self.radius
    }

    fn diameter_sq_from(&self, anchor: &[f64]) -> f64 {
        // Exact for anchors inside the ball: the farthest member lies on the
        // boundary diametrically opposite the anchor.
        let off = linalg::dist(anchor, &self.center);
        let d = self.radius + off;
        d * d
    }

    fn max_linear(&self, c: &[f64]) -> Vec<f64> {
        let nrm = linalg::norm(c);
        if nrm == 0.0 {
            return self.center.clone();
        }
        linalg::axpy(&self.center, self.radius / nrm, c)
    }
}

/// Axis-aligned box `{x : lower ≤ x ≤ upper}` (componentwise).
#[derive(Clone, Debug)]
pub struct BoxSet {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxSet {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, CoreError> {
        if lower.len() != upper.len() {
            return Err(CoreError::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(CoreError::invalid("bounds", "lower must not exceed upper"));
        }
        Ok(Self { lower, upper })
    }
}

impl FeasibleSet for BoxSet {
    fn dim(&self) -> usize {
        self.lower.len()
    }

    fn project(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .map(|((v, l), u)| v.clamp(*l, *u))
            .collect()
    }

    fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.lower)
                .zip(&self.upper)
                .all(|((v, l), u)| *v >= l - CONTAINS_TOL && *v <= u + CONTAINS_TOL)
    }

    fn radius_sq(&self) -> f64 {
        let diag_sq: f64 = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| (u - l) * (u - l))
            .sum();
        0.5 * diag_sq
    }

    fn diameter_sq_from(&self, anchor: &[f64]) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .zip(anchor)
            .map(|((l, u), a)| {
                let d = (a - l).abs().max((u - a).abs());
                d * d
            })
            .sum()
    }

    fn max_linear(&self, c: &[f64]) -> Vec<f64> {
        c.iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .map(|((ci, l), u)| if *ci >= 0.0 { *u } else { *l })
            .collect()
    }
}

/// Product of two sets; vectors are the concatenation of the two blocks and
/// the norm is `√(‖u‖² + ‖v‖²)`, so projection acts blockwise.
pub struct ProductSet {
    first: Box<dyn FeasibleSet>,
    second: Box<dyn FeasibleSet>,
}

impl ProductSet {
    pub fn new(first: Box<dyn FeasibleSet>, second: Box<dyn FeasibleSet>) -> Self {
        Self { first, second }
    }

    pub fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        x.split_at(self.first.dim())
    }
}

impl FeasibleSet for ProductSet {
    fn dim(&self) -> usize {
        self.first.dim() + self.second.dim()
    }

    fn project(&self, x: &[f64]) -> Vec<f64> {
        let (u, v) = self.split(x);
        let mut out = self.first.project(u);
        out.extend(self.second.project(v));
        out
    }

    fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let (u, v) = self.split(x);
        self.first.contains(u) && self.second.contains(v)
    }

    fn radius_sq(&self) -> f64 {
        self.first.radius_sq() + self.second.radius_sq()
    }

    fn diameter_sq_from(&self, anchor: &[f64]) -> f64 {
        let (u, v) = self.split(anchor);
        self.first.diameter_sq_from(u) + self.second.diameter_sq_from(v)
    }

    fn max_linear(&self, c: &[f64]) -> Vec<f64> {
        let (cu, cv) = self.split(c);
        let mut out = self.first.max_linear(cu);
        out.extend(self.second.max_linear(cv));
        out
    }
}

/// Prox step for a linear model:
/// `argmin_{x∈set} ⟨g, x − anchor⟩ + (weight/2)‖x − anchor‖²`,
/// which is `project(anchor − g/weight)`.
pub fn prox_linear(
    g: &[f64],
    anchor: &[f64],
    weight: f64,
    set: &dyn FeasibleSet,
) -> Result<Vec<f64>, CoreError> {
    if !(weight > 0.0) {
        return Err(CoreError::invalid("weight", "must be positive"));
    }
    if g.len() != anchor.len() || anchor.len() != set.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: set.dim(),
            got: g.len(),
        });
    }
    Ok(set.project(&linalg::axpy(anchor, -1.0 / weight, g)))
}

/// Prox step for a general model:
/// `argmin_{x∈set} ψ(x) + (weight/2)‖x − anchor‖²`, delegated to a caller
/// supplied inner solver. The result is checked for membership.
pub fn prox_model<S>(
    model: &ModelEvaluation,
    anchor: &[f64],
    weight: f64,
    set: &dyn FeasibleSet,
    inner_solver: S,
) -> Result<Vec<f64>, CoreError>
where
    S: Fn(&ModelEvaluation, &[f64], f64, &dyn FeasibleSet) -> Result<Vec<f64>, CoreError>,
{
    if !(weight > 0.0) {
        return Err(CoreError::invalid("weight", "must be positive"));
    }
    let x = inner_solver(model, anchor, weight, set)?;
    if !set.contains(&x) {
        return Err(CoreError::InnerSolver(
            "inner solver returned an infeasible point".into(),
        ));
    }
    Ok(x)
}
