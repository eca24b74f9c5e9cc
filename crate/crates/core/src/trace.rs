//! Run traces shared by every solver, and their CSV encoding.
//!
//! The CSV schema is fixed: header `k,f_hat,gap,L_k,gamma_k,oracle_calls,elapsed_ms`,
//! floats at 17 significant digits, unused columns empty. Identical runs
//! produce byte-identical files; the `elapsed_ms` column is therefore always
//! left empty and wall time lives in the (non-deterministic) summary record.

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The iteration budget was consumed.
    MaxIters,
    /// The configured target gap was reached.
    TargetGap,
    /// The method's own stopping certificate fired (universal mode,
    /// Mirror Prox accumulation rule).
    Certificate,
    /// A zero subgradient was encountered: the point is optimal.
    ZeroGradient,
    /// The budget ran out before the stopping certificate fired; the
    /// result is still usable but carries no accuracy certificate.
    BudgetExceeded,
}

/// Full trace of one solver run.
///
/// Histories are indexed by iteration: entry `k` describes the state after
/// `k + 1` accepted iterations. `iterates[0]` is the starting point, so
/// `iterates` is one longer than the histories.
pub struct RunResult {
    /// `x_0, x_1, …, x_N`.
    pub iterates: Vec<Vec<f64>>,
    /// The solver's designated output: the `1/L`-weighted average for the
    /// gradient method and Mirror Prox, the final iterate for the fast
    /// gradient method, the rule-specific average for subgradient runs,
    /// the best iterate for the strong-oracle method.
    pub output_point: Vec<f64>,
    /// Objective value at the reporting point per iteration (see
    /// `f_hat_is_exact` for whether these are exact or oracle values).
    pub f_hat_history: Vec<f64>,
    /// True when `f_hat_history` was computed with the exact objective;
    /// false when only oracle model values were available.
    pub f_hat_is_exact: bool,
    /// Accepted line-search constant per iteration (the fixed `L` for the
    /// strong-oracle method).
    pub l_history: Vec<f64>,
    /// Total model/oracle evaluations, line-search trials included.
    pub oracle_calls: usize,
    /// Acceptance tests performed per iteration (`i_k + 1`).
    pub line_search_counts: Vec<usize>,
    /// Per-iteration theorem bound when a caller filled it in.
    pub bound_history: Option<Vec<f64>>,
    /// Accumulated weight `A_k` (fast gradient method only).
    pub a_history: Option<Vec<f64>>,
    /// `α_k` per iteration (fast gradient method only).
    pub alpha_history: Option<Vec<f64>>,
    /// `S_k = Σ 1/L` (Mirror Prox only).
    pub s_history: Option<Vec<f64>>,
    /// Reported gap per iteration when an evaluator exists (Mirror Prox).
    pub gap_history: Option<Vec<f64>>,
    /// `‖x_{k+1} − x_k‖` per iteration (strong-oracle method only).
    pub step_norms: Option<Vec<f64>>,
    /// Step size `γ_k` per iteration (subgradient baselines only).
    pub gamma_history: Option<Vec<f64>>,
    /// Model error `δ` read at the accepted center per iteration.
    pub delta_history: Vec<f64>,
    /// Cumulative oracle calls after each iteration.
    pub calls_history: Vec<usize>,
    pub termination: Termination,
    /// Non-fatal diagnostics (e.g. an oracle `δ` above the admissible
    /// restart level).
    pub warnings: Vec<String>,
}

impl RunResult {
    pub(crate) fn new(x0: Vec<f64>) -> Self {
        Self {
            iterates: vec![x0],
            output_point: Vec::new(),
            f_hat_history: Vec::new(),
            f_hat_is_exact: false,
            l_history: Vec::new(),
            oracle_calls: 0,
            line_search_counts: Vec::new(),
            bound_history: None,
            a_history: None,
            alpha_history: None,
            s_history: None,
            gap_history: None,
            step_norms: None,
            gamma_history: None,
            delta_history: Vec::new(),
            calls_history: Vec::new(),
            termination: Termination::MaxIters,
            warnings: Vec::new(),
        }
    }

    /// Number of accepted iterations.
    pub fn iterations(&self) -> usize {
        self.f_hat_history.len()
    }

    /// Largest `δ` observed along the run (0 for an exact run).
    pub fn delta_max(&self) -> f64 {
        self.delta_history.iter().cloned().fold(0.0, f64::max)
    }

    /// Largest accepted `L`.
    pub fn l_max(&self) -> f64 {
        self.l_history.iter().cloned().fold(0.0, f64::max)
    }

    /// Encodes the trace into the fixed CSV schema. `f_min` supplies the
    /// `gap` column (`f̂_k − f_min`); pass `None` to leave it empty.
    pub fn to_csv(&self, f_min: Option<f64>) -> String {
        let mut out = String::from("k,f_hat,gap,L_k,gamma_k,oracle_calls,elapsed_ms\n");
        let n = self.f_hat_history.len();
        for k in 0..n {
            let f_hat = self.f_hat_history[k];
            let gap = f_min.map(|fm| f_hat - fm);
            let l_k = self.l_history.get(k);
            let gamma_k = self.gamma_history.as_ref().and_then(|g| g.get(k));
            let calls = match self.calls_history.get(k) {
                Some(c) => c.to_string(),
                None if k + 1 == n => self.oracle_calls.to_string(),
                None => String::new(),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},\n",
                k + 1,
                fmt17(f_hat),
                gap.map(fmt17).unwrap_or_default(),
                l_k.map(|v| fmt17(*v)).unwrap_or_default(),
                gamma_k.map(|v| fmt17(*v)).unwrap_or_default(),
                calls,
            ));
        }
        out
    }
}

/// Fixed 17-significant-digit float encoding used in all emitted files.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
