//! `twophase`: solve suite problems, benchmark both solvers, build profiles.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twophase_qn::bench::{self, Metric};
use twophase_qn::diagnostics::{fd_hessian, reference_optimum, ConvergenceDiagnostics};
use twophase_qn::objective::DEFAULT_FD_STEP;
use twophase_qn::suite::{manifest_csv, GRADIENT_CHECK_TOL};
use twophase_qn::{check_gradient, lookup, suite, Error, Mode, Objective, SolverConfig, SolverKind};

#[derive(Parser)]
#[command(name = "twophase", version, about = "Two-phase quasi-Newton and BFGS on a 30-problem test suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one suite problem.
    Solve(SolveArgs),
    /// Run both solvers over the suite with timing.
    Bench(BenchArgs),
    /// Build performance profiles from a results CSV.
    Profile(ProfileArgs),
    /// Verify every analytic gradient against central differences.
    Check,
    /// Print the suite manifest as CSV.
    List,
}

#[derive(Args)]
struct SolverFlags {
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// b-form or h-form
    #[arg(long, default_value = "b-form", value_parser = parse_mode)]
    mode: Mode,
}

impl SolverFlags {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            lambda: self.lambda,
            tol: self.tol,
            max_iter: self.max_iter,
            mode: self.mode,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: String,
    /// bfgs or two-phase
    #[arg(long, value_parser = parse_solver)]
    solver: SolverKind,
    #[command(flatten)]
    flags: SolverFlags,
    /// Problem dimension (default 10).
    #[arg(long)]
    dim: Option<usize>,
    /// Write the iterate trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the convergence diagnostics as CSV.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = bench::DEFAULT_RUNS)]
    runs: usize,
    /// Results CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comparison table; `.csv` gives CSV, anything else Markdown.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Restrict to these problems (repeatable).
    #[arg(long = "problem")]
    problems: Vec<String>,
    #[command(flatten)]
    flags: SolverFlags,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// iterations or time
    #[arg(long, default_value = "iterations", value_parser = parse_metric)]
    metric: Metric,
    /// Profile CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    NotConverged,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let base = lookup(&args.problem)?;
    let problem = match args.dim {
        Some(n) => base.with_dimension(n)?,
        None => base.clone(),
    };
    let mut cfg = args.flags.config();
    cfg.record_operators = args.diagnostics.is_some();
    let x0 = problem.objective.standard_start();
    let r = args.solver.solve(&problem.objective, &x0, &cfg)?;

    println!("problem      {} (n = {})", problem.name(), problem.dimension());
    println!("solver       {}", args.solver);
    println!("termination  {}", r.termination.as_str());
    println!("iterations   {}", r.iterations);
    println!("f            {:.12e}", r.final_f);
    println!("grad norm    {:.3e}", r.final_grad_norm);
    println!("evaluations  f {} / grad {}", r.f_evals, r.g_evals);
    println!("time         {:.3} ms", r.elapsed.as_secs_f64() * 1e3);
    if problem.dimension() == 10 {
        let row = problem.table_row;
        let published = match args.solver {
            SolverKind::Bfgs => row.bfgs_iters,
            SolverKind::TwoPhase => row.twophase_iters,
        };
        println!("published    {published} iterations");
    }

    if let Some(path) = &args.trace {
        write_file(path, &r.trace_csv()?)?;
    }
    if let Some(path) = &args.diagnostics {
        let x_star = match &problem.known_optimum {
            Some(opt) => opt.x.clone(),
            None => reference_optimum(&problem.objective, &x0)?,
        };
        let hess = fd_hessian(&problem.objective, &x_star, 1e-4)?;
        let d = ConvergenceDiagnostics::from_run(&r, &x_star, &hess)?;
        write_file(path, &d.to_csv()?)?;
    }
    if r.converged() {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn run_bench(args: BenchArgs) -> Result<(), Failure> {
    let problems: Vec<_> = if args.problems.is_empty() {
        suite().to_vec()
    } else {
        args.problems
            .iter()
            .map(|n| lookup(n).cloned())
            .collect::<Result<_, _>>()?
    };
    let cfg = args.flags.config();
    let records = bench::run_suite_with(&problems, &SolverKind::ALL, &cfg, args.runs, |r| {
        println!(
            "{:<34} {:<10} {:>4} it  {:>9.3} ms{}",
            r.problem,
            r.solver,
            r.iterations,
            r.median_time_ms,
            if r.converged { "" } else { "  NOT CONVERGED" }
        );
    })?;
    let failed = records.iter().filter(|r| !r.converged).count();
    let violations: usize = records.iter().map(|r| r.wolfe_violations).sum();
    println!(
        "{} records, {} runs each, {failed} not converged, {violations} Wolfe re-check violations",
        records.len(),
        args.runs
    );

    if let Some(path) = &args.out {
        write_file(path, &bench::results_csv(&records)?)?;
    }
    if let Some(path) = &args.table {
        let table = bench::emit_table(&records)?;
        for w in &table.warnings {
            eprintln!("warning: {w}");
        }
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        write_file(path, if is_csv { &table.csv } else { &table.markdown })?;
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn profile(args: ProfileArgs) -> Result<(), Failure> {
    let records = bench::load_results_csv(&args.input)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.input.display())))?;
    let curves = bench::dolan_more(&records, args.metric)?;
    for c in &curves {
        let worst = c.ratios.iter().copied().fold(1.0, f64::max);
        println!("{:<10} P(1) = {:.4}  max ratio = {worst}", c.solver, c.value_at(1.0));
    }
    if let Some(path) = &args.out {
        write_file(path, &bench::profile_csv(&curves)?)?;
    }
    if let Some(path) = &args.svg {
        let title = match args.metric {
            Metric::Iterations => "Performance profile: iterations",
            Metric::Time => "Performance profile: time",
        };
        bench::emit_profile_svg(&curves, title, path)?;
    }
    Ok(())
}

fn check() -> Result<(), Failure> {
    let mut failed = 0;
    for p in suite() {
        let r = check_gradient(&p.objective, &p.gradient_probe_points(), DEFAULT_FD_STEP, GRADIENT_CHECK_TOL)?;
        if !r.passed() {
            failed += 1;
        }
        println!(
            "{:<34} {}  max rel error {:.2e} over {} points",
            p.name(),
            if r.passed() { "ok  " } else { "FAIL" },
            r.max_rel_error,
            r.probe_points
        );
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{failed} gradients failed verification")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => run_bench(a),
        Command::Profile(a) => profile(a),
        Command::Check => check(),
        Command::List => manifest_csv(suite()).map(|t| print!("{t}")).map_err(Failure::from),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotConverged) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
