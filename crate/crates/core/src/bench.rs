//! Benchmark harness: timed suite runs, the comparison table, and
//! Dolan–Moré performance profiles.
//!
//! For a cost `r_{p,s}` of solver `s` on problem `p`,
//! `ρ_{p,s} = r_{p,s} / min_s r_{p,s}` and `P_s(τ) = |{p : ρ_{p,s} ≤ τ}| / n_p`.
//! Runs that did not converge get `ρ = ∞`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::line_search::WolfeParams;
use crate::objective::Objective;
use crate::solvers::{SolveResult, SolverConfig, SolverKind};
use crate::suite::{lookup, suite, SuiteProblem};

/// Runs per (problem, solver) pair in the published protocol.
pub const DEFAULT_RUNS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkRecord {
    pub problem: String,
    pub solver: String,
    pub n: usize,
    /// From the first run; equals the iteration cap when not converged.
    pub iterations: usize,
    pub median_time_ms: f64,
    pub mean_time_ms: f64,
    pub runs: usize,
    pub converged: bool,
    pub f_final: f64,
    pub grad_norm_final: f64,
    /// Wolfe acceptances of the first run that were re-evaluated.
    pub wolfe_checked: usize,
    pub wolfe_violations: usize,
}

#[derive(Serialize, Deserialize)]
struct CsvRecord {
    problem: String,
    solver: String,
    n: usize,
    iterations: usize,
    median_time_ms: f64,
    converged: bool,
    f_final: f64,
    grad_norm_final: f64,
}

impl From<&BenchmarkRecord> for CsvRecord {
    fn from(r: &BenchmarkRecord) -> Self {
        CsvRecord {
            problem: r.problem.clone(),
            solver: r.solver.clone(),
            n: r.n,
            iterations: r.iterations,
            median_time_ms: r.median_time_ms,
            converged: r.converged,
            f_final: r.f_final,
            grad_norm_final: r.grad_norm_final,
        }
    }
}

impl From<CsvRecord> for BenchmarkRecord {
    fn from(r: CsvRecord) -> Self {
        BenchmarkRecord {
            problem: r.problem,
            solver: r.solver,
            n: r.n,
            iterations: r.iterations,
            median_time_ms: r.median_time_ms,
            mean_time_ms: r.median_time_ms,
            runs: 1,
            converged: r.converged,
            f_final: r.f_final,
            grad_norm_final: r.grad_norm_final,
            wolfe_checked: 0,
            wolfe_violations: 0,
        }
    }
}

/// `problem,solver,n,iterations,median_time_ms,converged,f_final,grad_norm_final`
pub fn write_results_csv<W: std::io::Write>(records: &[BenchmarkRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRecord::from(r))?;
    }
    if records.is_empty() {
        w.write_record([
            "problem",
            "solver",
            "n",
            "iterations",
            "median_time_ms",
            "converged",
            "f_final",
            "grad_norm_final",
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn results_csv(records: &[BenchmarkRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_results_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Parses a results CSV. Columns `runs`, `mean_time_ms` and the audit
/// counters are not part of the file and come back as 1, the median and 0.
pub fn read_results_csv<R: std::io::Read>(input: R) -> Result<Vec<BenchmarkRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, row) in rd.deserialize::<CsvRecord>().enumerate() {
        let row = row.map_err(|e| Error::Parse(format!("results row {}: {e}", i + 1)))?;
        out.push(row.into());
    }
    Ok(out)
}

pub fn load_results_csv(path: &Path) -> Result<Vec<BenchmarkRecord>> {
    read_results_csv(std::fs::File::open(path)?)
}

/// Outcome of re-evaluating every accepted Wolfe step of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WolfeAudit {
    pub checked: usize,
    pub violations: usize,
}

/// Recomputes `f` and `∇f` at both ends of every search reported as
/// Wolfe-satisfied and checks both inequalities afresh.
pub fn audit_wolfe<O: Objective + ?Sized>(f: &O, run: &SolveResult, params: &WolfeParams) -> WolfeAudit {
    let mut audit = WolfeAudit::default();
    for search in run.trace.iter().flat_map(|r| &r.searches) {
        if search.status != crate::line_search::SearchStatus::WolfeSatisfied {
            continue;
        }
        audit.checked += 1;
        let x = &search.origin;
        let p = &search.direction;
        let f0 = f.value(x);
        let slope = f.gradient(x).dot(p);
        let x_new = x.offset(search.alpha, p);
        let f_new = f.value(&x_new);
        let new_slope = f.gradient(&x_new).dot(p);
        let armijo = f_new <= f0 + params.c1 * search.alpha * slope;
        let curvature = new_slope >= params.c2 * slope;
        if !(armijo && curvature) {
            audit.violations += 1;
        }
    }
    audit
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Runs every (problem, solver) pair `runs` times, sequentially.
pub fn run_suite(
    problems: &[SuiteProblem],
    solvers: &[SolverKind],
    cfg: &SolverConfig,
    runs: usize,
) -> Result<Vec<BenchmarkRecord>> {
    run_suite_with(problems, solvers, cfg, runs, |_| {})
}

/// [`run_suite`] with a callback invoked as each record completes.
pub fn run_suite_with(
    problems: &[SuiteProblem],
    solvers: &[SolverKind],
    cfg: &SolverConfig,
    runs: usize,
    mut on_record: impl FnMut(&BenchmarkRecord),
) -> Result<Vec<BenchmarkRecord>> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    cfg.validate()?;
    let mut records = Vec::with_capacity(problems.len() * solvers.len());
    for p in problems {
        let x0 = p.objective.standard_start();
        for &solver in solvers {
            let mut times = Vec::with_capacity(runs);
            let mut first: Option<std::result::Result<SolveResult, Error>> = None;
            for _ in 0..runs {
                let res = solver.solve(&p.objective, &x0, cfg);
                if let Ok(r) = &res {
                    times.push(r.elapsed.as_secs_f64() * 1e3);
                }
                match (&first, &res) {
                    (None, _) => first = Some(res),
                    (Some(Ok(a)), Ok(b)) if a.iterations != b.iterations => {
                        return Err(Error::Nondeterministic {
                            problem: p.name().to_string(),
                            solver: solver.name().to_string(),
                        })
                    }
                    _ => {}
                }
            }
            let record = match first.expect("runs ≥ 1") {
                Ok(r) => {
                    let audit = audit_wolfe(&p.objective, &r, &cfg.wolfe);
                    let mean = times.iter().sum::<f64>() / times.len() as f64;
                    BenchmarkRecord {
                        problem: p.name().to_string(),
                        solver: solver.name().to_string(),
                        n: p.dimension(),
                        iterations: if r.converged() { r.iterations } else { cfg.max_iter },
                        median_time_ms: median(&mut times),
                        mean_time_ms: mean,
                        runs,
                        converged: r.converged(),
                        f_final: r.final_f,
                        grad_norm_final: r.final_grad_norm,
                        wolfe_checked: audit.checked,
                        wolfe_violations: audit.violations,
                    }
                }
                Err(_) => BenchmarkRecord {
                    problem: p.name().to_string(),
                    solver: solver.name().to_string(),
                    n: p.dimension(),
                    iterations: cfg.max_iter,
                    median_time_ms: f64::NAN,
                    mean_time_ms: f64::NAN,
                    runs,
                    converged: false,
                    f_final: f64::NAN,
                    grad_norm_final: f64::NAN,
                    wolfe_checked: 0,
                    wolfe_violations: 0,
                },
            };
            on_record(&record);
            records.push(record);
        }
    }
    Ok(records)
}

/// One untimed solve from a parallel validation sweep.
#[derive(Debug)]
pub struct Validation {
    pub problem: &'static str,
    pub solver: SolverKind,
    pub result: Result<SolveResult>,
}

/// Solves every pair once, in parallel, returned in problem-then-solver order.
pub fn validate_parallel(problems: &[SuiteProblem], solvers: &[SolverKind], cfg: &SolverConfig) -> Vec<Validation> {
    let jobs: Vec<(&SuiteProblem, SolverKind)> =
        problems.iter().flat_map(|p| solvers.iter().map(move |&s| (p, s))).collect();
    jobs.par_iter()
        .map(|&(p, solver)| Validation {
            problem: p.name(),
            solver,
            result: solver.solve(&p.objective, &p.objective.standard_start(), cfg),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Iterations,
    Time,
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "iterations" | "iters" => Ok(Metric::Iterations),
            "time" => Ok(Metric::Time),
            other => Err(Error::InvalidParameter(format!("unknown metric {other:?}"))),
        }
    }
}

impl Metric {
    fn cost(self, r: &BenchmarkRecord) -> f64 {
        if !r.converged {
            return f64::INFINITY;
        }
        match self {
            Metric::Iterations => r.iterations as f64,
            Metric::Time => r.median_time_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileCurve {
    pub solver: String,
    /// `ρ_{p,s}` per problem, in problem order.
    pub ratios: Vec<f64>,
    /// `(τ, P_s(τ))` at every distinct finite ratio over all solvers.
    pub points: Vec<(f64, f64)>,
}

impl ProfileCurve {
    /// `P_s(τ)`
    pub fn value_at(&self, tau: f64) -> f64 {
        if self.ratios.is_empty() {
            return 0.0;
        }
        self.ratios.iter().filter(|r| **r <= tau).count() as f64 / self.ratios.len() as f64
    }
}

/// Dolan–Moré profiles over `records`; every problem needs one record per solver.
pub fn dolan_more(records: &[BenchmarkRecord], metric: Metric) -> Result<Vec<ProfileCurve>> {
    let mut problems: Vec<&str> = Vec::new();
    let mut solvers: Vec<&str> = Vec::new();
    let mut cost: HashMap<(&str, &str), f64> = HashMap::new();
    for r in records {
        if !problems.contains(&r.problem.as_str()) {
            problems.push(&r.problem);
        }
        if !solvers.contains(&r.solver.as_str()) {
            solvers.push(&r.solver);
        }
        if cost.insert((&r.problem, &r.solver), metric.cost(r)).is_some() {
            return Err(Error::Parse(format!("duplicate record for {} / {}", r.problem, r.solver)));
        }
    }
    let mut ratios = vec![Vec::with_capacity(problems.len()); solvers.len()];
    for p in &problems {
        let mut row = Vec::with_capacity(solvers.len());
        for s in &solvers {
            let c = *cost.get(&(*p, *s)).ok_or_else(|| Error::IncompleteRecords {
                problem: p.to_string(),
                solver: s.to_string(),
            })?;
            if c.is_nan() || c < 0.0 {
                return Err(Error::Parse(format!("invalid cost {c} for {p} / {s}")));
            }
            row.push(c);
        }
        let best = row.iter().copied().fold(f64::INFINITY, f64::min);
        for (si, c) in row.into_iter().enumerate() {
            let rho = if c == f64::INFINITY {
                f64::INFINITY
            } else if c == best {
                1.0
            } else {
                c / best
            };
            ratios[si].push(rho);
        }
    }
    let taus: BTreeSet<u64> = ratios
        .iter()
        .flatten()
        .filter(|r| r.is_finite())
        .map(|r| r.to_bits())
        .chain(std::iter::once(1f64.to_bits()))
        .collect();
    let mut taus: Vec<f64> = taus.into_iter().map(f64::from_bits).collect();
    taus.sort_by(f64::total_cmp);
    Ok(solvers
        .iter()
        .zip(ratios)
        .map(|(s, ratios)| {
            let mut curve = ProfileCurve {
                solver: s.to_string(),
                ratios,
                points: Vec::new(),
            };
            curve.points = taus.iter().map(|&t| (t, curve.value_at(t))).collect();
            curve
        })
        .collect())
}

/// `solver,tau,P`
pub fn profile_csv(curves: &[ProfileCurve]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["solver", "tau", "P"])?;
    for c in curves {
        for (tau, p) in &c.points {
            w.write_record([c.solver.clone(), tau.to_string(), p.to_string()])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One line of the comparison table. Times are seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    #[serde(rename = "Sl")]
    pub sl: usize,
    #[serde(rename = "Function")]
    pub function: String,
    #[serde(rename = "BFGS Iteration")]
    pub bfgs_iters: Option<usize>,
    #[serde(rename = "BFGS Time")]
    pub bfgs_time_s: Option<f64>,
    #[serde(rename = "TP Iteration")]
    pub tp_iters: Option<usize>,
    #[serde(rename = "TP Time")]
    pub tp_time_s: Option<f64>,
}

const TABLE_HEADER: [&str; 6] = ["Sl", "Function", "BFGS Iteration", "BFGS Time", "TP Iteration", "TP Time"];

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub rows: Vec<ComparisonRow>,
    pub markdown: String,
    pub csv: String,
    /// Messages for the diagnostic stream.
    pub warnings: Vec<String>,
}

/// Rows in suite order: suite problems first, anything else after, by name.
pub fn comparison_rows(records: &[BenchmarkRecord]) -> Vec<ComparisonRow> {
    let mut by_problem: Vec<(usize, String)> = Vec::new();
    for r in records {
        if by_problem.iter().any(|(_, n)| *n == r.problem) {
            continue;
        }
        let sl = lookup(&r.problem).map(|p| p.table_row.sl).unwrap_or(usize::MAX);
        by_problem.push((sl, r.problem.clone()));
    }
    by_problem.sort();
    by_problem
        .into_iter()
        .enumerate()
        .map(|(i, (sl, name))| {
            let find = |s: SolverKind| records.iter().find(|r| r.problem == name && r.solver == s.name());
            let b = find(SolverKind::Bfgs);
            let t = find(SolverKind::TwoPhase);
            ComparisonRow {
                sl: if sl == usize::MAX { i + 1 } else { sl },
                function: name,
                bfgs_iters: b.map(|r| r.iterations),
                bfgs_time_s: b.map(|r| r.median_time_ms / 1e3),
                tp_iters: t.map(|r| r.iterations),
                tp_time_s: t.map(|r| r.median_time_ms / 1e3),
            }
        })
        .collect()
}

/// The comparison table as Markdown and CSV.
pub fn emit_table(records: &[BenchmarkRecord]) -> Result<Table> {
    let rows = comparison_rows(records);
    let mut warnings = Vec::new();
    if rows.is_empty() {
        warnings.push("no records selected; table has a header only".to_string());
    }

    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(TABLE_HEADER)?;
    for r in &rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let csv = String::from_utf8(bytes).expect("csv output is utf-8");

    let mut md = String::new();
    let _ = writeln!(md, "| {} |", TABLE_HEADER.join(" | "));
    let _ = writeln!(md, "|{}", "---|".repeat(TABLE_HEADER.len()));
    let converged = |solver: SolverKind, name: &str| {
        records
            .iter()
            .find(|r| r.problem == name && r.solver == solver.name())
            .is_some_and(|r| r.converged)
    };
    for r in &rows {
        let iters = |v: Option<usize>, s: SolverKind| match v {
            Some(i) if converged(s, &r.function) => i.to_string(),
            Some(i) => format!("{i} (not converged)"),
            None => "–".into(),
        };
        let time = |v: Option<f64>| v.map(|t| format!("{t:.6}")).unwrap_or_else(|| "–".into());
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} | {} | {} |",
            r.sl,
            r.function,
            iters(r.bfgs_iters, SolverKind::Bfgs),
            time(r.bfgs_time_s),
            iters(r.tp_iters, SolverKind::TwoPhase),
            time(r.tp_time_s)
        );
    }
    Ok(Table {
        rows,
        markdown: md,
        csv,
        warnings,
    })
}

pub fn parse_table_csv(text: &str) -> Result<Vec<ComparisonRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != TABLE_HEADER {
        return Err(Error::Parse(format!("unexpected table header {header:?}")));
    }
    rd.deserialize()
        .map(|r| r.map_err(|e| Error::Parse(format!("table row: {e}"))))
        .collect()
}

/// The published comparison as benchmark records: 5 runs, all converged,
/// final values unknown (NaN).
pub fn published_records() -> Vec<BenchmarkRecord> {
    suite()
        .iter()
        .flat_map(|p| {
            let row = p.table_row;
            [
                (SolverKind::Bfgs, row.bfgs_iters, row.bfgs_time_s),
                (SolverKind::TwoPhase, row.twophase_iters, row.twophase_time_s),
            ]
            .map(|(s, iters, secs)| BenchmarkRecord {
                problem: p.name().to_string(),
                solver: s.name().to_string(),
                n: p.dimension(),
                iterations: iters,
                median_time_ms: secs * 1e3,
                mean_time_ms: secs * 1e3,
                runs: DEFAULT_RUNS,
                converged: true,
                f_final: f64::NAN,
                grad_norm_final: f64::NAN,
                wolfe_checked: 0,
                wolfe_violations: 0,
            })
        })
        .collect()
}

const PALETTE: [(&str, &str); 4] = [("#1f77b4", ""), ("#d62728", "6 3"), ("#2ca02c", "2 2"), ("#9467bd", "8 3 2 3")];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A static step plot of the curves, `τ ∈ [1, 1.05·max finite ρ]`, `P ∈ [0, 1]`.
pub fn profile_svg(curves: &[ProfileCurve], title: &str) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::InvalidParameter("no profile curves to plot".into()));
    }
    let max_rho = curves
        .iter()
        .flat_map(|c| c.ratios.iter())
        .copied()
        .filter(|r| r.is_finite())
        .fold(1.0, f64::max);
    let (t0, t1) = (1.0, 1.05 * max_rho);
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (60.0, 20.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let sx = |t: f64| left + (t - t0) / (t1 - t0) * pw;
    let sy = |p: f64| top + (1.0 - p) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        w / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let p = i as f64 / 5.0;
        let y = sy(p);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{p:.1}</text>"#,
            left - 5.0,
            left - 8.0,
            y + 4.0
        );
        let t = t0 + (t1 - t0) * p;
        let x = sx(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{t:.2}</text>"#,
            top + ph,
            top + ph + 5.0,
            top + ph + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">τ</text><text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">P(ρ ≤ τ)</text>"#,
        left + pw / 2.0,
        h - 10.0,
        top + ph / 2.0,
        top + ph / 2.0
    );

    for (i, c) in curves.iter().enumerate() {
        let (color, dash) = PALETTE[i % PALETTE.len()];
        let mut d = format!("M {:.2} {:.2}", sx(t0), sy(c.value_at(t0)));
        let mut prev = c.value_at(t0);
        for &(tau, p) in &c.points {
            if tau <= t0 || p == prev {
                continue;
            }
            let _ = write!(d, " H {:.2} V {:.2}", sx(tau), sy(p));
            prev = p;
        }
        let _ = write!(d, " H {:.2}", sx(t1));
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let _ = writeln!(
            s,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="2"{dash_attr}/>"#
        );
        let ly = top + 15.0 + 18.0 * i as f64;
        let lx = left + pw - 150.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash_attr}/><text x="{}" y="{}">{}</text>"#,
            lx + 30.0,
            lx + 36.0,
            ly + 4.0,
            escape(&c.solver)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_profile_svg(curves: &[ProfileCurve], title: &str, path: &Path) -> Result<()> {
    std::fs::write(path, profile_svg(curves, title)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(problem: &str, solver: &str, iterations: usize, converged: bool) -> BenchmarkRecord {
        BenchmarkRecord {
            problem: problem.into(),
            solver: solver.into(),
            n: 10,
            iterations,
            median_time_ms: iterations as f64 * 0.5,
            mean_time_ms: iterations as f64 * 0.5,
            runs: 1,
            converged,
            f_final: 0.0,
            grad_norm_final: 0.0,
            wolfe_checked: 0,
            wolfe_violations: 0,
        }
    }

    #[test]
    fn profile_of_table_fixture() {
        let curves = dolan_more(&published_records(), Metric::Iterations).unwrap();
        let tp = curves.iter().find(|c| c.solver == "two-phase").unwrap();
        let bfgs = curves.iter().find(|c| c.solver == "bfgs").unwrap();
        assert_eq!(tp.value_at(1.0), 0.9);
        assert_eq!(bfgs.value_at(1.0), 0.2);
        let hager = suite().iter().position(|p| p.name() == "Hager").unwrap();
        assert_eq!(bfgs.ratios[hager], 2.125);
        assert_eq!(tp.ratios[hager], 1.0);
    }

    #[test]
    fn profile_single_solver_is_one() {
        let recs = vec![rec("a", "x", 3, true), rec("b", "x", 9, true)];
        let c = &dolan_more(&recs, Metric::Iterations).unwrap()[0];
        assert_eq!(c.points, vec![(1.0, 1.0)]);
        assert_eq!(c.value_at(1.0), 1.0);
    }

    #[test]
    fn profile_failures_are_infinite() {
        let recs = vec![
            rec("a", "x", 4, true),
            rec("a", "y", 500, false),
            rec("b", "x", 10, true),
            rec("b", "y", 5, true),
        ];
        let curves = dolan_more(&recs, Metric::Iterations).unwrap();
        assert_eq!(curves[1].ratios[0], f64::INFINITY);
        assert_eq!(curves[0].ratios[1], 2.0);
        assert_eq!(curves[1].value_at(1e300), 0.5);
        assert_eq!(curves[0].points, vec![(1.0, 0.5), (2.0, 1.0)]);
        for c in &curves {
            assert!(c.points.windows(2).all(|w| w[0].1 <= w[1].1));
        }
    }

    #[test]
    fn profile_requires_complete_records() {
        let recs = vec![rec("a", "x", 4, true), rec("a", "y", 5, true), rec("b", "x", 10, true)];
        match dolan_more(&recs, Metric::Iterations) {
            Err(Error::IncompleteRecords { problem, solver }) => assert_eq!((problem.as_str(), solver.as_str()), ("b", "y")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn time_metric_uses_median() {
        let recs = vec![rec("a", "x", 4, true), rec("a", "y", 8, true)];
        let curves = dolan_more(&recs, "time".parse().unwrap()).unwrap();
        assert_eq!(curves[1].ratios, vec![2.0]);
        assert!("speed".parse::<Metric>().is_err());
    }

    #[test]
    fn results_csv_round_trip() {
        let recs = vec![rec("Hager", "bfgs", 17, true), rec("Hager", "two-phase", 500, false)];
        let text = results_csv(&recs).unwrap();
        assert!(text.starts_with("problem,solver,n,iterations,median_time_ms,converged,f_final,grad_norm_final\n"));
        let back = read_results_csv(text.as_bytes()).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in recs.iter().zip(&back) {
            assert_eq!(CsvRecord::from(a).problem, b.problem);
            assert_eq!(a.iterations, b.iterations);
            assert_eq!(a.median_time_ms, b.median_time_ms);
            assert_eq!(a.converged, b.converged);
        }
        assert!(read_results_csv("problem,solver\nx,y\n".as_bytes()).is_err());
    }

    #[test]
    fn table_order_and_round_trip() {
        let recs = published_records();
        let t = emit_table(&recs).unwrap();
        assert_eq!(t.rows.len(), 30);
        assert_eq!(t.csv.lines().count(), 31);
        assert_eq!(t.markdown.lines().count(), 32);
        assert!(t.warnings.is_empty());
        assert!(t.rows.windows(2).all(|w| w[0].sl < w[1].sl));
        assert_eq!(parse_table_csv(&t.csv).unwrap(), t.rows);
        let hager = t.rows.iter().find(|r| r.function == "Hager").unwrap();
        assert_eq!((hager.bfgs_iters, hager.tp_iters), (Some(17), Some(8)));
    }

    #[test]
    fn empty_table_warns() {
        let t = emit_table(&[]).unwrap();
        assert_eq!(t.csv, "Sl,Function,BFGS Iteration,BFGS Time,TP Iteration,TP Time\n");
        assert_eq!(t.markdown.lines().count(), 2);
        assert_eq!(t.warnings.len(), 1);
    }

    #[test]
    fn svg_has_one_path_per_curve() {
        let curves = dolan_more(&published_records(), Metric::Iterations).unwrap();
        let svg = profile_svg(&curves, "iterations").unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains(">bfgs<") && svg.contains(">two-phase<"));
        assert!(profile_svg(&[], "x").is_err());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn run_suite_single_pair() {
        let p = lookup("Raydan2").unwrap();
        let recs = run_suite(std::slice::from_ref(p), &[SolverKind::TwoPhase], &SolverConfig::default(), 2).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert!(r.converged && r.runs == 2 && r.iterations > 0);
        assert!(r.wolfe_checked > 0 && r.wolfe_violations == 0);
        assert!(run_suite(std::slice::from_ref(p), &[SolverKind::Bfgs], &SolverConfig::default(), 0).is_err());
    }

    #[test]
    fn run_suite_failure_records_cap() {
        let p = lookup("Generalized PSC1").unwrap();
        let cfg = SolverConfig {
            max_iter: 3,
            ..SolverConfig::default()
        };
        let r = &run_suite(std::slice::from_ref(p), &[SolverKind::Bfgs], &cfg, 1).unwrap()[0];
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
    }
}
