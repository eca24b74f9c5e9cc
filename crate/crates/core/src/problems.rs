//! Non-smooth geometric test problems: best approximation of a point and
//! Fermat–Torricelli–Steiner, with seeded generators, exact subgradients,
//! Hölder certificates at `ν = 0`, and reference optimal values.
//!
//! Problem instances serialize to a versioned line-based text file (floats
//! at 17 significant digits) so runs are portable and reproducible.

use crate::error::CoreError;
use crate::fgm::{run_adaptive_fgm, DeltaSchedule};
use crate::gm::GmConfig;
use crate::linalg;
use crate::model::{make_holder_oracle, Degree, InexactOracle};
use crate::rng::{Xoshiro256pp, RNG_ALGORITHM};
use crate::sets::{EuclideanBall, FeasibleSet};
use crate::trace::fmt17;

/// Best approximation: `f(x) = ‖x − A‖` for an external point `A`.
#[derive(Clone, Debug)]
pub struct BestApproximation {
    pub a: Vec<f64>,
    pub seed: u64,
}

/// Fermat–Torricelli–Steiner: `f(x) = (1/T)·Σ ‖x − A_j‖`.
#[derive(Clone, Debug)]
pub struct FermatTorricelliSteiner {
    pub anchors: Vec<Vec<f64>>,
    pub seed: u64,
}

/// A benchmark problem instance.
#[derive(Clone, Debug)]
pub enum Problem {
    BestApprox(BestApproximation),
    Fts(FermatTorricelliSteiner),
}

/// Draws `n` coordinates uniform on `[0, 1)` and rescales to `‖A‖ = 10`
/// exactly. The direction is biased to the positive orthant by
/// construction (coordinates are uniform, not the direction).
pub fn generate_best_approx(n: usize, seed: u64) -> Result<BestApproximation, CoreError> {
    if n < 1 {
        return Err(CoreError::invalid("n", "must be at least 1"));
    }
    let mut rng = Xoshiro256pp::seed_from_u64(seed);
    let a = loop {
        let raw: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let nrm = linalg::norm(&raw);
        if nrm > 1e-12 {
            break linalg::scale(&raw, 10.0 / nrm);
        }
    };
    Ok(BestApproximation { a, seed })
}

/// Draws `T` anchor points with coordinates uniform on `[0, 1)`.
pub fn generate_fts(n: usize, t: usize, seed: u64) -> Result<FermatTorricelliSteiner, CoreError> {
    if n < 1 {
        return Err(CoreError::invalid("n", "must be at least 1"));
    }
    if t < 1 {
        return Err(CoreError::invalid("T", "must be at least 1"));
    }
    let mut rng = Xoshiro256pp::seed_from_u64(seed);
    let anchors = (0..t)
        .map(|_| (0..n).map(|_| rng.next_f64()).collect())
        .collect();
    Ok(FermatTorricelliSteiner { anchors, seed })
}

impl Problem {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Problem::BestApprox(_) => "best-approx",
            Problem::Fts(_) => "fts",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Problem::BestApprox(p) => p.a.len(),
            Problem::Fts(p) => p.anchors[0].len(),
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Problem::BestApprox(p) => p.seed,
            Problem::Fts(p) => p.seed,
        }
    }

    /// Objective value.
    pub fn f(&self, x: &[f64]) -> f64 {
        match self {
            Problem::BestApprox(p) => linalg::dist(x, &p.a),
            Problem::Fts(p) => {
                p.anchors.iter().map(|a| linalg::dist(x, a)).sum::<f64>() / p.anchors.len() as f64
            }
        }
    }

    /// A subgradient. At a nondifferentiable point (`x = A_j`) the
    /// corresponding term contributes zero, which stays a valid selection
    /// since `0 ∈ ∂‖·‖` at the origin.
    pub fn subgrad(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Problem::BestApprox(p) => {
                let d = linalg::sub(x, &p.a);
                let nrm = linalg::norm(&d);
                if nrm == 0.0 {
                    vec![0.0; x.len()]
                } else {
                    linalg::scale(&d, 1.0 / nrm)
                }
            }
            Problem::Fts(p) => {
                let mut g = vec![0.0; x.len()];
                for a in &p.anchors {
                    let d = linalg::sub(x, a);
                    let nrm = linalg::norm(&d);
                    if nrm > 0.0 {
                        for (gi, di) in g.iter_mut().zip(&d) {
                            *gi += di / nrm;
                        }
                    }
                }
                linalg::scale(&g, 1.0 / p.anchors.len() as f64)
            }
        }
    }

    /// Hölder constant at `ν = 0`: the subgradient variation is at most 2
    /// for both objectives (differences of unit-ball averages).
    pub fn holder_l0(&self) -> f64 {
        2.0
    }

    /// The shared benchmark starting point `(1/√n, …, 1/√n)`.
    pub fn initial_point(&self) -> Vec<f64> {
        let n = self.dim();
        vec![1.0 / (n as f64).sqrt(); n]
    }

    /// Analytic optimal value on a ball, when one exists: the distance
    /// from the external point for best approximation, and the coincident
    /// anchor degeneracy for Fermat–Torricelli–Steiner.
    pub fn analytic_f_star(&self, set: &EuclideanBall) -> Option<f64> {
        match self {
            Problem::BestApprox(p) => {
                Some((linalg::dist(&p.a, set.center()) - set.radius()).max(0.0))
            }
            Problem::Fts(p) => {
                let first = &p.anchors[0];
                if p.anchors.iter().all(|a| a == first) {
                    Some((linalg::dist(first, set.center()) - set.radius()).max(0.0))
                } else {
                    None
                }
            }
        }
    }

    /// Exact-subgradient inexact oracle for this problem (`ν = 0`
    /// Hölder model with a declared constant `δ` of degree `q < 1`).
    pub fn holder_oracle(&self, delta: f64, q: Degree) -> Result<InexactOracle, CoreError> {
        let p_g = self.clone();
        let p_f = self.clone();
        make_holder_oracle(
            move |x: &[f64]| p_g.subgrad(x),
            move |x: &[f64]| p_f.f(x),
            self.holder_l0(),
            0.0,
            delta,
            q,
        )
    }

    /// Serializes to the versioned problem-file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str("qopt-problem v1\n");
        out.push_str(&format!("rng {RNG_ALGORITHM}\n"));
        out.push_str(&format!("kind {}\n", self.kind_name()));
        out.push_str(&format!("n {}\n", self.dim()));
        if let Problem::Fts(p) = self {
            out.push_str(&format!("t {}\n", p.anchors.len()));
        }
        out.push_str(&format!("seed {}\n", self.seed()));
        let write_anchor = |out: &mut String, a: &[f64]| {
            out.push_str("anchor");
            for v in a {
                out.push(' ');
                out.push_str(&fmt17(*v));
            }
            out.push('\n');
        };
        match self {
            Problem::BestApprox(p) => write_anchor(&mut out, &p.a),
            Problem::Fts(p) => {
                for a in &p.anchors {
                    write_anchor(&mut out, a);
                }
            }
        }
        out
    }

    /// Parses the versioned problem-file format.
    pub fn from_file_string(text: &str) -> Result<Self, CoreError> {
        let bad = |m: &str| CoreError::MalformedProblemFile(m.to_string());
        let mut lines = text.lines();
        if lines.next() != Some("qopt-problem v1") {
            return Err(bad("missing or unsupported header"));
        }
        let mut kind = None;
        let mut n = None;
        let mut t = None;
        let mut seed = None;
        let mut anchors: Vec<Vec<f64>> = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("rng") => {
                    if parts.next() != Some(RNG_ALGORITHM) {
                        return Err(bad("unknown rng algorithm"));
                    }
                }
                Some("kind") => kind = parts.next().map(str::to_string),
                Some("n") => {
                    n = Some(
                        parts
                            .next()
                            .and_then(|v| v.parse::<usize>().ok())
                            .ok_or_else(|| bad("bad n"))?,
                    )
                }
                Some("t") => {
                    t = Some(
                        parts
                            .next()
                            .and_then(|v| v.parse::<usize>().ok())
                            .ok_or_else(|| bad("bad t"))?,
                    )
                }
                Some("seed") => {
                    seed = Some(
                        parts
                            .next()
                            .and_then(|v| v.parse::<u64>().ok())
                            .ok_or_else(|| bad("bad seed"))?,
                    )
                }
                Some("anchor") => {
                    let coords: Result<Vec<f64>, _> = parts.map(str::parse::<f64>).collect();
                    anchors.push(coords.map_err(|_| bad("bad anchor coordinates"))?);
                }
                Some(_) => return Err(bad("unknown field")),
                None => {}
            }
        }
        let n = n.ok_or_else(|| bad("missing n"))?;
        let seed = seed.ok_or_else(|| bad("missing seed"))?;
        if anchors.iter().any(|a| a.len() != n) {
            return Err(bad("anchor dimension does not match n"));
        }
        match kind.as_deref() {
            Some("best-approx") => {
                if anchors.len() != 1 {
                    return Err(bad("best-approx needs exactly one anchor"));
                }
                Ok(Problem::BestApprox(BestApproximation {
                    a: anchors.remove(0),
                    seed,
                }))
            }
            Some("fts") => {
                let expected = t.ok_or_else(|| bad("missing t"))?;
                if anchors.len() != expected {
                    return Err(bad("anchor count does not match t"));
                }
                Ok(Problem::Fts(FermatTorricelliSteiner { anchors, seed }))
            }
            _ => Err(bad("missing or unknown kind")),
        }
    }
}

/// Where a reference optimal value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FminProvenance {
    /// Closed-form value (exact).
    Analytic,
    /// In-repo high-accuracy solve with a duality certificate.
    ReferenceSolve,
}

/// A reference optimal value: a rigorous lower bound on `f_*` together
/// with its distance to the best objective value found.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceValue {
    /// Lower bound on `f_*`; benchmark gaps are measured against this, so
    /// they stay nonnegative.
    pub value: f64,
    /// `f_best − value`: how far below the true optimum the bound may sit.
    /// Zero for analytic values.
    pub uncertainty: f64,
    pub provenance: FminProvenance,
}

/// Computes a reference optimal value on a ball.
///
/// Analytic when available; otherwise a universal fast-gradient solve at
/// `ε = 1e−8` followed by a projected-subgradient polish. The reported
/// value is the best rigorous lower bound on `f_*` seen: the convexity
/// bound `f(x) − max_{u∈set}⟨g(x), x − u⟩` along the polish, or the
/// universal certificate `f(x_N) − (R²/A_N + ε/2)` when the run
/// terminated by it.
pub fn reference_fmin(problem: &Problem, set: &EuclideanBall, budget: usize) -> ReferenceValue {
    if let Some(f_star) = problem.analytic_f_star(set) {
        return ReferenceValue {
            value: f_star,
            uncertainty: 0.0,
            provenance: FminProvenance::Analytic,
        };
    }

    let eps = 1e-8;
    let q = Degree::new(0.5).expect("static degree");
    let x0 = set.project(&problem.initial_point());
    let mut f_best;
    let mut lower = f64::NEG_INFINITY;
    let mut x = x0.clone();
    let mut l_est = 1.0;

    // Stage 1: universal solve toward the certificate.
    let oracle = problem
        .holder_oracle(0.0, q)
        .expect("holder oracle for q = 0.5");
    let schedule = DeltaSchedule::universal(eps, set, q).expect("positive eps");
    let config = GmConfig {
        l0: 1.0,
        max_iters: (budget / 2).max(1),
        target_gap: None,
        f_star: None,
        line_search_cap: 60,
    };
    match run_adaptive_fgm(&oracle, set, &x0, &schedule, &config) {
        Ok(run) => {
            let f_out = problem.f(&run.output_point);
            f_best = f_out;
            x = run.output_point.clone();
            if let Some(&l_last) = run.l_history.last() {
                l_est = l_last;
            }
            if run.termination == crate::trace::Termination::Certificate {
                if let Some(a_hist) = &run.a_history {
                    if let Some(&a_n) = a_hist.last() {
                        lower = lower.max(f_out - (set.radius_sq() / a_n + 0.5 * eps));
                    }
                }
            }
        }
        Err(_) => {
            f_best = problem.f(&x0);
        }
    }

    // Stage 2: projected-subgradient polish with a monotone safeguard,
    // collecting the convexity lower bound along the way.
    let mut step = 1.0 / l_est.max(1e-12);
    let mut f_x = problem.f(&x);
    let polish_iters = (budget / 2).max(1);
    for _ in 0..polish_iters {
        let g = problem.subgrad(&x);
        let u = set.max_linear(&linalg::scale(&g, -1.0));
        let dual_gap = linalg::dot(&g, &linalg::sub(&x, &u));
        lower = lower.max(f_x - dual_gap);
        if f_best - lower <= 1e-10 {
            break;
        }
        let x_try = set.project(&linalg::axpy(&x, -step, &g));
        let f_try = problem.f(&x_try);
        if f_try <= f_x {
            x = x_try;
            f_x = f_try;
            f_best = f_best.min(f_x);
        } else {
            step *= 0.5;
        }
    }

    if !lower.is_finite() {
        // Best effort: no certificate was obtained within the budget.
        lower = f_best;
    }
    ReferenceValue {
        value: lower,
        uncertainty: f_best - lower,
        provenance: FminProvenance::ReferenceSolve,
    }
}
