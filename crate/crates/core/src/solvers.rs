//! Baseline BFGS and the two-phase quasi-Newton method.
//!
//! One two-phase iteration from `x_k` with operator `B_k`:
//!
//! 1. `p̄ = −B_k⁻¹ ∇f_k`, Wolfe search gives `x̄ = x_k + ᾱ p̄`;
//! 2. `s = x̄ − x_k`, `y = ∇f(x̄) − ∇f_k`, `B̄ = BFGS(B_k, s, y)`;
//! 3. `B_{k+1} = λ B_k + (1 − λ) B̄`;
//! 4. `p = −B_{k+1}⁻¹ ∇f_k` (gradient still at `x_k`), Wolfe search from `x_k`
//!    gives `x_{k+1}`.
//!
//! `B_{k+1}` is then the operator for the first phase of the next iteration.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::line_search::{wolfe_search, LineSearchOutcome, SearchStatus, WolfeParams};
use crate::linalg::{CholeskyFactor, SymMatrix, Vector};
use crate::objective::Objective;

/// Relative curvature threshold below which an update is skipped:
/// `sᵀy ≤ UPDATE_SKIP_TOL·‖s‖‖y‖`.
pub const UPDATE_SKIP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Maintain `B_k`, combine directly, solve with Cholesky.
    #[default]
    BForm,
    /// Maintain `H_k = B_k⁻¹` and combine as `(λH⁻¹ + (1−λ)H̄⁻¹)⁻¹`.
    HFormLiteral,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "b-form" | "b" => Ok(Mode::BForm),
            "h-form" | "h" | "h-form-literal" => Ok(Mode::HFormLiteral),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub lambda: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub wolfe: WolfeParams,
    pub update_skip_tol: f64,
    pub mode: Mode,
    /// Keep `(B_k, s_k, y_k, p̄_k, B_{k+1})` for every iteration.
    pub record_operators: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lambda: 0.5,
            tol: 1e-6,
            max_iter: 500,
            wolfe: WolfeParams::default(),
            update_skip_tol: UPDATE_SKIP_TOL,
            mode: Mode::BForm,
            record_operators: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1), got {}", self.lambda)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        if !(self.update_skip_tol >= 0.0) {
            return Err(Error::InvalidParameter("update_skip_tol must be non-negative".into()));
        }
        self.wolfe.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Bfgs,
    TwoPhase,
}

impl SolverKind {
    pub const ALL: [SolverKind; 2] = [SolverKind::Bfgs, SolverKind::TwoPhase];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Bfgs => "bfgs",
            SolverKind::TwoPhase => "two-phase",
        }
    }

    pub fn solve<O: Objective + ?Sized>(self, f: &O, x0: &Vector, cfg: &SolverConfig) -> Result<SolveResult> {
        match self {
            SolverKind::Bfgs => solve_bfgs(f, x0, cfg),
            SolverKind::TwoPhase => solve_two_phase(f, x0, cfg),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', ' '], "-").as_str() {
            "bfgs" => Ok(SolverKind::Bfgs),
            "two-phase" | "twophase" | "tp" | "two-phase-qn" => Ok(SolverKind::TwoPhase),
            other => Err(Error::InvalidParameter(format!("unknown solver {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIter,
    LineSearchExhausted,
    SpdFailure,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIter => "max_iter",
            Termination::LineSearchExhausted => "line_search_exhausted",
            Termination::SpdFailure => "spd_failure",
        }
    }
}

/// One line search as it was run, kept so acceptance can be re-checked.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchRecord {
    pub origin: Vector,
    pub direction: Vector,
    pub f_origin: f64,
    pub alpha: f64,
    pub status: SearchStatus,
}

impl SearchRecord {
    fn new(origin: &Vector, direction: &Vector, f_origin: f64, out: &LineSearchOutcome) -> Self {
        SearchRecord {
            origin: origin.clone(),
            direction: direction.clone(),
            f_origin,
            alpha: out.alpha,
            status: out.status,
        }
    }
}

/// State after iteration `k`; `k = 0` is the starting point.
#[derive(Clone, Debug, PartialEq)]
pub struct IterateRecord {
    pub k: usize,
    pub x: Vector,
    pub f: f64,
    pub grad_norm: f64,
    pub alpha_bar: Option<f64>,
    pub alpha: f64,
    /// Cosine of the angle between `s_k` and `B_k s_k`.
    pub cos_theta: Option<f64>,
    pub update_skipped: bool,
    /// `(x_{k+1} − x̄_k)ᵀ ∇f(x̄_k) < 0`; two-phase only.
    pub assumption2: Option<bool>,
    pub searches: Vec<SearchRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSnapshot {
    pub k: usize,
    /// `B_k` (inverted from `H_k` in H-form).
    pub b: SymMatrix,
    pub s: Vector,
    pub y: Vector,
    /// First-phase direction; for BFGS the only direction.
    pub p_bar: Vector,
    /// `B_{k+1}`; equals `b` when the update was skipped.
    pub b_next: SymMatrix,
    pub update_skipped: bool,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub solver: SolverKind,
    pub final_x: Vector,
    pub final_f: f64,
    pub final_grad_norm: f64,
    pub iterations: usize,
    pub f_evals: usize,
    pub g_evals: usize,
    pub termination: Termination,
    pub trace: Vec<IterateRecord>,
    pub operators: Vec<OperatorSnapshot>,
    pub elapsed: Duration,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    /// `k,f,grad_norm,alpha_bar,alpha,cos_theta,update_skipped`
    pub fn trace_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "f", "grad_norm", "alpha_bar", "alpha", "cos_theta", "update_skipped"])?;
        let opt = |v: Option<f64>| v.map(|a| format!("{a:e}")).unwrap_or_default();
        for r in &self.trace {
            w.write_record([
                r.k.to_string(),
                format!("{:e}", r.f),
                format!("{:e}", r.grad_norm),
                opt(r.alpha_bar),
                format!("{:e}", r.alpha),
                opt(r.cos_theta),
                r.update_skipped.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn check_curvature(s: &Vector, y: &Vector, skip_tol: f64) -> Result<f64> {
    if s.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            actual: y.len(),
        });
    }
    let sy = s.dot(y);
    if !(sy > skip_tol * s.norm() * y.norm()) || sy <= 0.0 {
        return Err(Error::CurvatureViolation { sy });
    }
    Ok(sy)
}

/// `B − (B s sᵀ B)/(sᵀ B s) + (y yᵀ)/(yᵀ s)`
pub fn bfgs_update_b(b: &SymMatrix, s: &Vector, y: &Vector, skip_tol: f64) -> Result<SymMatrix> {
    if b.order() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: b.order(),
            actual: s.len(),
        });
    }
    let sy = check_curvature(s, y, skip_tol)?;
    let bs = b.mul_vec(s);
    let sbs = s.dot(&bs);
    if !(sbs > 0.0) {
        return Err(Error::NotPositiveDefinite { index: 0, pivot: sbs });
    }
    b.outer_rank1_update(&bs, -1.0 / sbs)?.outer_rank1_update(y, 1.0 / sy)
}

/// `(I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ` with `ρ = 1/(yᵀ s)`.
pub fn bfgs_update_h(h: &SymMatrix, s: &Vector, y: &Vector, skip_tol: f64) -> Result<SymMatrix> {
    if h.order() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: h.order(),
            actual: s.len(),
        });
    }
    let rho = 1.0 / check_curvature(s, y, skip_tol)?;
    let hy = h.mul_vec(y);
    let yhy = y.dot(&hy);
    let ss_coef = rho * rho * yhy + rho;
    let n = h.order();
    let mut out = SymMatrix::zeros(n);
    for j in 0..n {
        for i in 0..=j {
            let v = h.get(i, j) - rho * (s[i] * hy[j] + hy[i] * s[j]) + ss_coef * s[i] * s[j];
            out.set(i, j, v);
        }
    }
    Ok(out)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lambda must lie in (0, 1), got {lambda}")))
    }
}

/// `λ B + (1 − λ) B̄`
pub fn two_phase_combine(b: &SymMatrix, b_bar: &SymMatrix, lambda: f64) -> Result<SymMatrix> {
    check_lambda(lambda)?;
    b.lin_comb(lambda, b_bar, 1.0 - lambda)
}

/// `(λ H⁻¹ + (1 − λ) H̄⁻¹)⁻¹`, the inverse-side form of [`two_phase_combine`].
pub fn combine_h_literal(h: &SymMatrix, h_bar: &SymMatrix, lambda: f64) -> Result<SymMatrix> {
    check_lambda(lambda)?;
    if h.order() != h_bar.order() {
        return Err(Error::DimensionMismatch {
            expected: h.order(),
            actual: h_bar.order(),
        });
    }
    let b = h.cholesky()?.inverse();
    let b_bar = h_bar.cholesky()?.inverse();
    Ok(two_phase_combine(&b, &b_bar, lambda)?.cholesky()?.inverse())
}

/// The current operator in whichever representation the mode keeps.
enum Operator {
    B { b: SymMatrix, chol: CholeskyFactor },
    H { h: SymMatrix },
}

impl Operator {
    fn identity(n: usize, mode: Mode) -> Self {
        match mode {
            Mode::BForm => {
                let b = SymMatrix::identity(n);
                let chol = b.cholesky().expect("identity is SPD");
                Operator::B { b, chol }
            }
            Mode::HFormLiteral => Operator::H { h: SymMatrix::identity(n) },
        }
    }

    /// `−B⁻¹ g`
    fn direction(&self, g: &Vector) -> Result<Vector> {
        Ok(match self {
            Operator::B { chol, .. } => chol.solve(g)?.scaled(-1.0),
            Operator::H { h } => h.mul_vec(g).scaled(-1.0),
        })
    }

    fn b_matrix(&self) -> Result<SymMatrix> {
        Ok(match self {
            Operator::B { b, .. } => b.clone(),
            Operator::H { h } => h.cholesky()?.inverse(),
        })
    }

    /// BFGS update on whichever side is stored.
    fn bfgs(&self, s: &Vector, y: &Vector, skip_tol: f64) -> Result<SymMatrix> {
        match self {
            Operator::B { b, .. } => bfgs_update_b(b, s, y, skip_tol),
            Operator::H { h } => bfgs_update_h(h, s, y, skip_tol),
        }
    }

    /// Certifies `m` as SPD and wraps it in the same representation as `self`.
    fn certified(&self, m: SymMatrix) -> Result<Operator> {
        let chol = m.cholesky()?;
        Ok(match self {
            Operator::B { .. } => Operator::B { b: m, chol },
            Operator::H { .. } => Operator::H { h: m },
        })
    }

    fn two_phase(&self, bar: &SymMatrix, lambda: f64) -> Result<SymMatrix> {
        match self {
            Operator::B { b, .. } => two_phase_combine(b, bar, lambda),
            Operator::H { h } => combine_h_literal(h, bar, lambda),
        }
    }
}

fn cos_theta(g: &Vector, p: &Vector) -> Option<f64> {
    // s = αp and B s = −α g, so cos θ = −gᵀp / (‖g‖‖p‖)
    let denom = g.norm() * p.norm();
    (denom > 0.0).then(|| -g.dot(p) / denom)
}

struct Run<'a, O: ?Sized> {
    f: &'a O,
    cfg: &'a SolverConfig,
    x: Vector,
    fx: f64,
    g: Vector,
    f_evals: usize,
    g_evals: usize,
    trace: Vec<IterateRecord>,
    operators: Vec<OperatorSnapshot>,
}

impl<'a, O: Objective + ?Sized> Run<'a, O> {
    fn start(f: &'a O, x0: &Vector, cfg: &'a SolverConfig) -> Result<Self> {
        cfg.validate()?;
        if x0.len() != f.dimension() {
            return Err(Error::DimensionMismatch {
                expected: f.dimension(),
                actual: x0.len(),
            });
        }
        if !x0.is_finite() {
            return Err(Error::NonFinite("starting point".into()));
        }
        let fx = f.value(x0);
        let g = f.gradient(x0);
        if !fx.is_finite() || !g.is_finite() {
            return Err(Error::NonFinite(format!("{} at the starting point", f.name())));
        }
        let trace = vec![IterateRecord {
            k: 0,
            x: x0.clone(),
            f: fx,
            grad_norm: g.norm(),
            alpha_bar: None,
            alpha: 0.0,
            cos_theta: None,
            update_skipped: false,
            assumption2: None,
            searches: Vec::new(),
        }];
        Ok(Run {
            f,
            cfg,
            x: x0.clone(),
            fx,
            g,
            f_evals: 1,
            g_evals: 1,
            trace,
            operators: Vec::new(),
        })
    }

    fn search(&mut self, p: &Vector) -> Result<LineSearchOutcome> {
        let out = wolfe_search(self.f, &self.x, p, self.fx, &self.g, &self.cfg.wolfe)?;
        self.f_evals += out.evals.f_count;
        self.g_evals += out.evals.g_count;
        Ok(out)
    }

    fn converged(&self) -> bool {
        self.g.norm() <= self.cfg.tol
    }

    fn finish(self, solver: SolverKind, termination: Termination, started: Instant) -> SolveResult {
        SolveResult {
            solver,
            final_grad_norm: self.g.norm(),
            final_f: self.fx,
            final_x: self.x,
            iterations: self.trace.len() - 1,
            f_evals: self.f_evals,
            g_evals: self.g_evals,
            termination,
            trace: self.trace,
            operators: self.operators,
            elapsed: started.elapsed(),
        }
    }
}

fn is_spd_loss(e: &Error) -> bool {
    matches!(e, Error::NotPositiveDefinite { .. } | Error::NonFinite(_))
}

/// Standard BFGS on the inverse operator, `H₀ = I`, one Wolfe search per iteration.
pub fn solve_bfgs<O: Objective + ?Sized>(f: &O, x0: &Vector, cfg: &SolverConfig) -> Result<SolveResult> {
    let started = Instant::now();
    let mut run = Run::start(f, x0, cfg)?;
    let mut op = Operator::identity(x0.len(), Mode::HFormLiteral);

    for k in 1..=cfg.max_iter {
        if run.converged() {
            break;
        }
        let p = op.direction(&run.g)?;
        let ls = match run.search(&p) {
            Ok(ls) if ls.accepted() => ls,
            // rounding can leave H·g with gᵀp ≥ 0 near the solution
            Ok(_) | Err(Error::NotDescentDirection(_)) => {
                return Ok(run.finish(SolverKind::Bfgs, Termination::LineSearchExhausted, started))
            }
            Err(e) => return Err(e),
        };
        let record = SearchRecord::new(&run.x, &p, run.fx, &ls);
        let x_new = run.x.offset(ls.alpha, &p);
        let s = x_new.sub(&run.x);
        let y = ls.grad_new.sub(&run.g);
        let cos = cos_theta(&run.g, &p);
        let b_before = if cfg.record_operators { Some(op.b_matrix()?) } else { None };

        let update = op.bfgs(&s, &y, cfg.update_skip_tol).and_then(|h| op.certified(h));
        let (next, skipped) = match update {
            Ok(next) => (next, false),
            Err(Error::CurvatureViolation { .. }) => (op, true),
            Err(e) if is_spd_loss(&e) => {
                run.x = x_new;
                run.fx = ls.f_new;
                run.g = ls.grad_new;
                return Ok(run.finish(SolverKind::Bfgs, Termination::SpdFailure, started));
            }
            Err(e) => return Err(e),
        };
        op = next;
        if let Some(b) = b_before {
            let b_next = if skipped { b.clone() } else { op.b_matrix()? };
            run.operators.push(OperatorSnapshot {
                k: k - 1,
                b,
                s,
                y,
                p_bar: p,
                b_next,
                update_skipped: skipped,
            });
        }

        run.x = x_new;
        run.fx = ls.f_new;
        run.g = ls.grad_new;
        run.trace.push(IterateRecord {
            k,
            x: run.x.clone(),
            f: run.fx,
            grad_norm: run.g.norm(),
            alpha_bar: None,
            alpha: ls.alpha,
            cos_theta: cos,
            update_skipped: skipped,
            assumption2: None,
            searches: vec![record],
        });
    }
    let term = if run.converged() { Termination::Converged } else { Termination::MaxIter };
    Ok(run.finish(SolverKind::Bfgs, term, started))
}

/// The two-phase quasi-Newton method, `B₀ = H₀ = I`.
///
/// When the first-phase step fails the curvature test the update is skipped,
/// `B_{k+1} = B_k`, and the second phase reuses `p̄`.
pub fn solve_two_phase<O: Objective + ?Sized>(f: &O, x0: &Vector, cfg: &SolverConfig) -> Result<SolveResult> {
    let started = Instant::now();
    let mut run = Run::start(f, x0, cfg)?;
    let mut op = Operator::identity(x0.len(), cfg.mode);

    for k in 1..=cfg.max_iter {
        if run.converged() {
            break;
        }
        // phase one
        let p_bar = op.direction(&run.g)?;
        let ls_bar = match run.search(&p_bar) {
            Ok(ls) if ls.accepted() => ls,
            Ok(_) | Err(Error::NotDescentDirection(_)) => {
                return Ok(run.finish(SolverKind::TwoPhase, Termination::LineSearchExhausted, started))
            }
            Err(e) => return Err(e),
        };
        let rec_bar = SearchRecord::new(&run.x, &p_bar, run.fx, &ls_bar);
        let x_bar = run.x.offset(ls_bar.alpha, &p_bar);
        let s = x_bar.sub(&run.x);
        let y = ls_bar.grad_new.sub(&run.g);
        let cos = cos_theta(&run.g, &p_bar);
        let b_before = if cfg.record_operators { Some(op.b_matrix()?) } else { None };

        // operator update B_{k+1} = λB_k + (1 − λ)B̄
        let update = op
            .bfgs(&s, &y, cfg.update_skip_tol)
            .and_then(|bar| op.two_phase(&bar, cfg.lambda))
            .and_then(|m| op.certified(m));
        let (next, skipped) = match update {
            Ok(next) => (next, false),
            Err(Error::CurvatureViolation { .. }) => (op, true),
            Err(e) if is_spd_loss(&e) => {
                if ls_bar.f_new < run.fx {
                    run.x = x_bar;
                    run.fx = ls_bar.f_new;
                    run.g = ls_bar.grad_new;
                }
                return Ok(run.finish(SolverKind::TwoPhase, Termination::SpdFailure, started));
            }
            Err(e) => return Err(e),
        };
        op = next;

        // phase two, still from x_k with ∇f_k
        let p = if skipped { p_bar.clone() } else { op.direction(&run.g)? };
        let ls = match run.search(&p) {
            Ok(ls) if ls.accepted() => ls,
            Ok(_) | Err(Error::NotDescentDirection(_)) => {
                if ls_bar.f_new < run.fx {
                    run.x = x_bar;
                    run.fx = ls_bar.f_new;
                    run.g = ls_bar.grad_new;
                }
                return Ok(run.finish(SolverKind::TwoPhase, Termination::LineSearchExhausted, started));
            }
            Err(e) => return Err(e),
        };
        let rec = SearchRecord::new(&run.x, &p, run.fx, &ls);
        let x_new = run.x.offset(ls.alpha, &p);
        let assumption2 = x_new.sub(&x_bar).dot(&ls_bar.grad_new) < 0.0;

        if let Some(b) = b_before {
            let b_next = if skipped { b.clone() } else { op.b_matrix()? };
            run.operators.push(OperatorSnapshot {
                k: k - 1,
                b,
                s,
                y,
                p_bar,
                b_next,
                update_skipped: skipped,
            });
        }

        run.x = x_new;
        run.fx = ls.f_new;
        run.g = ls.grad_new;
        run.trace.push(IterateRecord {
            k,
            x: run.x.clone(),
            f: run.fx,
            grad_norm: run.g.norm(),
            alpha_bar: Some(ls_bar.alpha),
            alpha: ls.alpha,
            cos_theta: cos,
            update_skipped: skipped,
            assumption2: Some(assumption2),
            searches: vec![rec_bar, rec],
        });
    }
    let term = if run.converged() { Termination::Converged } else { Termination::MaxIter };
    Ok(run.finish(SolverKind::TwoPhase, term, started))
}
