//! Benchmark CLI: generates the geometric test problems, runs the solvers
//! and subgradient baselines against them, compares methods, and verifies
//! the theorem-bound envelopes on synthetic certified scenarios.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a bound check fails.

mod methods;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qopt::problems::FminProvenance;
use qopt::sets::EuclideanBall;
use qopt::trace::fmt17;
use qopt::Problem;

use methods::{resolve_f_min, run_method, Method};

#[derive(Parser)]
#[command(name = "qopt-bench", disable_help_subcommand = true)]
#[command(about = "Benchmark harness for first-order methods with inexact oracles")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Generate a problem file.
    Gen(GenArgs),
    /// Run one method on a problem file and emit a CSV trace + summary.
    Run(RunArgs),
    /// Run the universal method and all applicable baselines, emit
    /// per-method CSVs, a ranking report and an SVG of the gap curves.
    Compare(CompareArgs),
    /// Verify the convergence-bound envelopes on synthetic scenarios.
    VerifyBounds(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemKind {
    BestApprox,
    Fts,
}

#[derive(Args)]
struct GenArgs {
    /// Problem family.
    #[arg(long, value_enum)]
    problem: ProblemKind,
    /// Dimension.
    #[arg(long)]
    n: usize,
    /// Number of anchor points (fts only).
    #[arg(long)]
    t: Option<usize>,
    /// Generator seed.
    #[arg(long, default_value = "1")]
    seed: u64,
    /// Output path (defaults to a name derived from the parameters).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Problem file produced by `gen`.
    #[arg(long)]
    problem_file: PathBuf,
    /// Method to run.
    #[arg(long, value_enum)]
    method: Method,
    /// Iteration budget (default 2000).
    #[arg(long)]
    iters: Option<usize>,
    /// Model degree q (universal and gm/fgm oracles).
    #[arg(long)]
    q: Option<f64>,
    /// Target accuracy for the universal method.
    #[arg(long)]
    eps: Option<f64>,
    /// Constant oracle error for gm/fgm runs.
    #[arg(long)]
    delta: Option<f64>,
    /// Iteration budget for the reference optimal-value solve.
    #[arg(long, default_value = "100000")]
    fmin_budget: usize,
    /// Output directory.
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    /// Optional config file with `key value` lines (iters/q/eps/delta);
    /// explicit flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    problem_file: PathBuf,
    /// Shared iteration budget (default 2000).
    #[arg(long)]
    iters: Option<usize>,
    /// Universal-method degree (default 0.9).
    #[arg(long)]
    q: Option<f64>,
    /// Universal-method target accuracy (default 1e-5).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value = "100000")]
    fmin_budget: usize,
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: gm, fgm, restart, strong or vi.
    #[arg(long)]
    suite: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successful exits; everything
            // else is a usage error.
            use clap::error::ErrorKind;
            let kind = err.kind();
            let _ = err.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Commands::Gen(args) => cmd_gen(args),
        Commands::Run(args) => cmd_run(args),
        Commands::Compare(args) => cmd_compare(args),
        Commands::VerifyBounds(args) => {
            if verify::run_suite(&args.suite)? {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    let problem = match args.problem {
        ProblemKind::BestApprox => Problem::BestApprox(
            qopt::generate_best_approx(args.n, args.seed).map_err(|e| e.to_string())?,
        ),
        ProblemKind::Fts => {
            let t = args.t.ok_or("fts requires --t")?;
            Problem::Fts(qopt::generate_fts(args.n, t, args.seed).map_err(|e| e.to_string())?)
        }
    };
    let path = args.out.unwrap_or_else(|| {
        let mut name = format!("{}-n{}", problem.kind_name(), args.n);
        if let Problem::Fts(p) = &problem {
            name.push_str(&format!("-t{}", p.anchors.len()));
        }
        name.push_str(&format!("-seed{}.problem", args.seed));
        PathBuf::from(name)
    });
    write_atomic(&path, problem.to_file_string().as_bytes())?;
    println!("wrote {}", path.display());
    let ball = EuclideanBall::unit(problem.dim());
    if let Some(f_star) = problem.analytic_f_star(&ball) {
        println!("f_star {}", fmt17(f_star));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Default)]
struct FileConfig {
    iters: Option<usize>,
    q: Option<f64>,
    eps: Option<f64>,
    delta: Option<f64>,
}

fn read_config(path: &PathBuf) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut cfg = FileConfig::default();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap_or_default();
        let value = parts
            .next()
            .ok_or_else(|| format!("config line `{line}` has no value"))?;
        match key {
            "iters" => cfg.iters = Some(value.parse().map_err(|_| "bad iters".to_string())?),
            "q" => cfg.q = Some(value.parse().map_err(|_| "bad q".to_string())?),
            "eps" => cfg.eps = Some(value.parse().map_err(|_| "bad eps".to_string())?),
            "delta" => cfg.delta = Some(value.parse().map_err(|_| "bad delta".to_string())?),
            other => return Err(format!("unknown config key `{other}`")),
        }
    }
    Ok(cfg)
}

fn load_problem(path: &PathBuf) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Problem::from_file_string(&text).map_err(|e| e.to_string())
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, String> {
    let file_cfg = match &args.config {
        Some(path) => read_config(path)?,
        None => FileConfig::default(),
    };
    let problem = load_problem(&args.problem_file)?;
    let iters = args.iters.or(file_cfg.iters).unwrap_or(2000);
    let q = args.q.or(file_cfg.q);
    let eps = args.eps.or(file_cfg.eps);
    let delta = args.delta.or(file_cfg.delta);

    let reference = resolve_f_min(&problem, args.fmin_budget);
    let started = std::time::Instant::now();
    let outcome = run_method(&problem, args.method, iters, q, eps, delta)?;
    let wall_ms = started.elapsed().as_millis();

    std::fs::create_dir_all(&args.out)
        .map_err(|e| format!("cannot create {}: {e}", args.out.display()))?;
    let csv_path = args.out.join(format!("{}.csv", args.method.name()));
    write_atomic(
        &csv_path,
        outcome.run.to_csv(Some(reference.value)).as_bytes(),
    )?;
    let summary_path = args.out.join(format!("{}.summary.txt", args.method.name()));
    let summary = summary_text(&problem, args.method.name(), &outcome, &reference, wall_ms);
    write_atomic(&summary_path, summary.as_bytes())?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", summary_path.display());
    if let Some(f) = outcome.run.f_hat_history.last() {
        println!("final_gap {}", fmt17(f - reference.value));
    }
    Ok(ExitCode::SUCCESS)
}

fn summary_text(
    problem: &Problem,
    method: &str,
    outcome: &methods::MethodOutcome,
    reference: &qopt::ReferenceValue,
    wall_ms: u128,
) -> String {
    let final_gap = outcome
        .run
        .f_hat_history
        .last()
        .map(|f| f - reference.value)
        .unwrap_or(f64::NAN);
    let provenance = match reference.provenance {
        FminProvenance::Analytic => "analytic",
        FminProvenance::ReferenceSolve => "reference-solve",
    };
    let mut out = String::new();
    out.push_str(&format!("method {method}\n"));
    out.push_str(&format!(
        "problem {} n={} seed={}\n",
        problem.kind_name(),
        problem.dim(),
        problem.seed()
    ));
    out.push_str(&format!("iterations {}\n", outcome.run.iterations()));
    out.push_str(&format!("final_gap {}\n", fmt17(final_gap)));
    out.push_str(&format!("oracle_calls {}\n", outcome.run.oracle_calls));
    out.push_str(&format!("f_min {}\n", fmt17(reference.value)));
    out.push_str(&format!("f_min_provenance {provenance}\n"));
    out.push_str(&format!(
        "f_min_certificate {}\n",
        fmt17(reference.uncertainty)
    ));
    out.push_str(&format!("rng {}\n", qopt::rng::RNG_ALGORITHM));
    out.push_str(&format!("termination {:?}\n", outcome.run.termination));
    for w in &outcome.run.warnings {
        out.push_str(&format!("warning {w}\n"));
    }
    out.push_str(&format!("wall_ms {wall_ms}\n"));
    out
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode, String> {
    let file_cfg = match &args.config {
        Some(path) => read_config(path)?,
        None => FileConfig::default(),
    };
    let problem = load_problem(&args.problem_file)?;
    let iters = args.iters.or(file_cfg.iters).unwrap_or(2000);
    let eps = args.eps.or(file_cfg.eps).unwrap_or(1e-5);
    let q = args.q.or(file_cfg.q).unwrap_or(0.9);

    let reference = resolve_f_min(&problem, args.fmin_budget);
    let mut methods_to_run = vec![
        Method::Ufgm,
        Method::Constant,
        Method::FixedLength,
        Method::Nonsum,
        Method::SqrsumNonsum,
        Method::QuadGrad,
        Method::Adagrad,
        Method::Adamirror,
    ];
    let ball = EuclideanBall::unit(problem.dim());
    if problem.analytic_f_star(&ball).is_some() {
        methods_to_run.push(Method::Polyak);
    }

    std::fs::create_dir_all(&args.out)
        .map_err(|e| format!("cannot create {}: {e}", args.out.display()))?;

    // One worker per method; no shared mutable state. Failures of one
    // method do not discard the others' results.
    let mut handles = Vec::new();
    for method in methods_to_run {
        let problem = problem.clone();
        handles.push(std::thread::spawn(move || {
            let started = std::time::Instant::now();
            let outcome = run_method(&problem, method, iters, Some(q), Some(eps), None);
            (method, outcome, started.elapsed().as_millis())
        }));
    }
    let mut results = Vec::new();
    for handle in handles {
        let (method, outcome, wall_ms) = handle
            .join()
            .map_err(|_| "a comparison worker panicked".to_string())?;
        match outcome {
            Ok(outcome) => results.push((method, outcome, wall_ms)),
            Err(err) => eprintln!("method {} failed: {err}", method.name()),
        }
    }
    if results.is_empty() {
        return Err("no method produced a result".into());
    }
    // Deterministic report order regardless of completion order.
    results.sort_by_key(|(m, _, _)| m.name());

    let mut curves = Vec::new();
    for (method, outcome, wall_ms) in &results {
        let csv_path = args.out.join(format!("{}.csv", method.name()));
        write_atomic(
            &csv_path,
            outcome.run.to_csv(Some(reference.value)).as_bytes(),
        )?;
        let summary = summary_text(&problem, method.name(), outcome, &reference, *wall_ms);
        write_atomic(
            &args.out.join(format!("{}.summary.txt", method.name())),
            summary.as_bytes(),
        )?;
        let gaps: Vec<f64> = outcome
            .run
            .f_hat_history
            .iter()
            .map(|f| f - reference.value)
            .collect();
        curves.push((method.name().to_string(), gaps));
    }

    let svg = svg::gap_curves_svg(&curves, iters);
    write_atomic(&args.out.join("curves.svg"), svg.as_bytes())?;

    let mut ranking: Vec<(String, f64)> = curves
        .iter()
        .map(|(name, gaps)| (name.clone(), gaps.last().copied().unwrap_or(f64::NAN)))
        .collect();
    ranking.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut report = String::from("rank method final_gap\n");
    for (i, (name, gap)) in ranking.iter().enumerate() {
        report.push_str(&format!("{} {} {}\n", i + 1, name, fmt17(*gap)));
    }
    write_atomic(&args.out.join("ranking.txt"), report.as_bytes())?;
    print!("{report}");
    Ok(ExitCode::SUCCESS)
}

/// Writes through a temporary file so concurrent readers never observe a
/// partial file.
fn write_atomic(path: &std::path::Path, bytes: &[u8]) -> Result<(), String> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes).map_err(|e| format!("cannot write {}: {e}", tmp.display()))?;
    std::fs::rename(&tmp, path).map_err(|e| format!("cannot rename to {}: {e}", path.display()))
}
