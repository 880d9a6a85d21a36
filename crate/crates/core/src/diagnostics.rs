//! Convergence-analysis quantities computed from recorded runs.
//!
//! Everything here is post-processing over an immutable [`SolveResult`]; the
//! operator series needs a run made with `record_operators = true`.

use crate::error::{Error, Result};
use crate::linalg::{SymMatrix, Vector};
use crate::objective::Objective;
use crate::solvers::{solve_two_phase, IterateRecord, SolveResult, SolverConfig};

/// Denominators `‖x_k − x*‖` below this are dropped from the ratio series.
pub const RATIO_FLOOR: f64 = 1e-12;

/// Gradient tolerance of the reference run used when no optimum is known.
pub const REFERENCE_TOL: f64 = 1e-10;

/// `ψ(B) = trace(B) − ln det(B)`
pub fn psi(b: &SymMatrix) -> Result<f64> {
    Ok(b.trace() - b.cholesky()?.log_determinant())
}

/// `q_k = ‖x_{k+1} − x*‖ / ‖x_k − x*‖` over consecutive trace entries.
pub fn superlinear_ratio_series(trace: &[IterateRecord], x_star: &Vector) -> Vec<f64> {
    let points: Vec<&Vector> = trace.iter().map(|r| &r.x).collect();
    ratio_series(&points, x_star)
}

/// Same as [`superlinear_ratio_series`] over bare points.
pub fn ratio_series(points: &[&Vector], x_star: &Vector) -> Vec<f64> {
    points
        .windows(2)
        .filter_map(|w| {
            let d0 = w[0].sub(x_star).norm();
            (d0 > RATIO_FLOOR).then(|| w[1].sub(x_star).norm() / d0)
        })
        .collect()
}

/// `‖(B − ∇²f*) p̄‖ / ‖p̄‖`
pub fn direction_quality(b: &SymMatrix, hess_star: &SymMatrix, p_bar: &Vector) -> Result<f64> {
    let norm = p_bar.norm();
    if norm == 0.0 {
        return Err(Error::ZeroDirection);
    }
    Ok(b.sub(hess_star)?.try_mul_vec(p_bar)?.norm() / norm)
}

/// Hessian by central differences of the analytic gradient, symmetrized.
pub fn fd_hessian<O: Objective + ?Sized>(f: &O, x: &Vector, h: f64) -> Result<SymMatrix> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("finite-difference step {h}")));
    }
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    let mut probe = x.clone();
    for i in 0..n {
        let xi = probe[i];
        probe[i] = xi + h;
        let gp = f.gradient(&probe);
        probe[i] = xi - h;
        let gm = f.gradient(&probe);
        probe[i] = xi;
        let col = gp.sub(&gm).scaled(0.5 / h);
        if !col.is_finite() {
            return Err(Error::NonFinite(format!("{} Hessian column {i}", f.name())));
        }
        cols.push(col);
    }
    let dense: Vec<f64> = (0..n).flat_map(|i| cols.iter().map(move |c| c[i])).collect();
    Ok(SymMatrix::from_dense_symmetrized(n, &dense))
}

/// Optimum estimate from a tight-tolerance two-phase run.
pub fn reference_optimum<O: Objective + ?Sized>(f: &O, x0: &Vector) -> Result<Vector> {
    let cfg = SolverConfig {
        tol: REFERENCE_TOL,
        max_iter: 2000,
        ..SolverConfig::default()
    };
    Ok(solve_two_phase(f, x0, &cfg)?.final_x)
}

/// `det(B_{k+1}) / det(B_k)` predicted from `(B_k, s_k, y_k)`.
pub fn det_recurrence_factor(b: &SymMatrix, s: &Vector, y: &Vector, lambda: f64) -> Result<f64> {
    let chol = b.cholesky()?;
    let ys = y.dot(s);
    let yhy = y.dot(&chol.solve(y)?);
    let sbs = b.quad_form(s);
    let mu = 1.0 - lambda;
    Ok(lambda + lambda * mu * yhy / ys + mu * mu * ys * ys / (sbs * ys))
}

/// `trace(B_{k+1})` predicted from `(B_k, s_k, y_k)`.
pub fn trace_recurrence(b: &SymMatrix, s: &Vector, y: &Vector, lambda: f64) -> Result<f64> {
    let bs = b.try_mul_vec(s)?;
    let sbs = s.dot(&bs);
    let mu = 1.0 - lambda;
    Ok(b.trace() - mu * bs.dot(&bs) / sbs + mu * y.dot(y) / y.dot(s))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceDiagnostics {
    /// `ψ(B_k)` for `k = 0..=K`.
    pub psi_series: Vec<f64>,
    pub q_ratios: Vec<f64>,
    /// `‖(B_k − ∇²f*) p̄_k‖ / ‖p̄_k‖` per iteration.
    pub dir_quality: Vec<f64>,
    pub assumption2_flags: Vec<bool>,
}

impl ConvergenceDiagnostics {
    /// Builds every series from a run recorded with operators.
    pub fn from_run(run: &SolveResult, x_star: &Vector, hess_star: &SymMatrix) -> Result<Self> {
        if run.operators.is_empty() && run.iterations > 0 {
            return Err(Error::InvalidParameter(
                "run has no operator record; solve with record_operators = true".into(),
            ));
        }
        let mut psi_series = Vec::with_capacity(run.operators.len() + 1);
        let mut dir_quality = Vec::with_capacity(run.operators.len());
        for op in &run.operators {
            psi_series.push(psi(&op.b)?);
            dir_quality.push(direction_quality(&op.b, hess_star, &op.p_bar)?);
        }
        if let Some(last) = run.operators.last() {
            psi_series.push(psi(&last.b_next)?);
        }
        Ok(ConvergenceDiagnostics {
            psi_series,
            q_ratios: superlinear_ratio_series(&run.trace, x_star),
            dir_quality,
            assumption2_flags: run.trace.iter().filter_map(|r| r.assumption2).collect(),
        })
    }

    /// `k,psi,q_ratio,dir_quality,assumption2`; series shorter than the longest leave blanks.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "psi", "q_ratio", "dir_quality", "assumption2"])?;
        let rows = self
            .psi_series
            .len()
            .max(self.q_ratios.len())
            .max(self.dir_quality.len())
            .max(self.assumption2_flags.len());
        let cell = |v: Option<&f64>| v.map(|a| format!("{a:e}")).unwrap_or_default();
        for k in 0..rows {
            w.write_record([
                k.to_string(),
                cell(self.psi_series.get(k)),
                cell(self.q_ratios.get(k)),
                cell(self.dir_quality.get(k)),
                self.assumption2_flags.get(k).map(|b| b.to_string()).unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
