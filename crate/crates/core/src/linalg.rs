//! Dense vector helpers over `&[f64]`.
//!
//! All solvers in this crate work on plain slices; the handful of
//! operations they need live here instead of pulling in a matrix library.

/// Inner product `⟨a, b⟩`. Panics on length mismatch.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm `‖a‖`.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Squared Euclidean norm `‖a‖²`.
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// Euclidean distance `‖a − b‖`.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Component-wise `a − b`.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Component-wise `a + b`.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a + s·b`.
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// `s·a`.
pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| s * x).collect()
}

/// Convex-style combination `(wa·a + wb·b) / (wa + wb)` used by the fast
/// gradient extrapolation steps. `wa + wb` must be positive.
pub fn weighted_mean(a: &[f64], wa: f64, b: &[f64], wb: f64) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    let total = wa + wb;
    a.iter()
        .zip(b)
        .map(|(x, y)| (wa * x + wb * y) / total)
        .collect()
}

/// `‖a − b‖^q` with the IEEE convention `0^0 = 1`, which matches the
/// degree-0 model semantics (a constant error term).
pub fn dist_pow(a: &[f64], b: &[f64], q: f64) -> f64 {
    dist(a, b).powf(q)
}
