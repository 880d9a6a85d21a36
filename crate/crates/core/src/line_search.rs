//! Backtracking Wolfe line search.
//!
//! Trials start at `α = 1` and contract by a fixed factor. The first trial
//! meeting both the sufficient-decrease and the curvature inequality is
//! accepted. `α` never exceeds one.
//!
//! When a trial's change in `f` is within a few ulps of `f(x)` the
//! sufficient-decrease test carries no information, so the trial is judged
//! on the gradient alone: `(2c1 − 1)·gᵀp ≥ ∇f(x + αp)ᵀp ≥ c2·gᵀp`. Such
//! steps are reported as [`SearchStatus::ApproximateWolfe`].

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::objective::Objective;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WolfeParams {
    /// Sufficient-decrease (Armijo) constant.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    /// Contraction factor applied after a failed trial.
    pub backtrack: f64,
    pub max_trials: usize,
}

impl Default for WolfeParams {
    fn default() -> Self {
        WolfeParams {
            c1: 1e-4,
            c2: 0.9,
            backtrack: 0.5,
            max_trials: 60,
        }
    }
}

impl WolfeParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.c1 && self.c1 < self.c2 && self.c2 < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Wolfe constants must satisfy 0 < c1 < c2 < 1 (c1 = {}, c2 = {})",
                self.c1, self.c2
            )));
        }
        if !(0.0 < self.backtrack && self.backtrack < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "backtracking factor must lie in (0, 1), got {}",
                self.backtrack
            )));
        }
        if self.max_trials == 0 {
            return Err(Error::InvalidParameter("max_trials must be at least 1".into()));
        }
        Ok(())
    }

    /// `f(x + αp) ≤ f(x) + c1·α·gᵀp`, with strict decrease.
    pub fn armijo_holds(&self, f_x: f64, slope: f64, alpha: f64, f_new: f64) -> bool {
        f_new <= f_x + self.c1 * alpha * slope && f_new < f_x
    }

    /// Gradient-only substitute for sufficient decrease, used at the round-off floor.
    pub fn approximate_wolfe_holds(&self, slope: f64, new_slope: f64) -> bool {
        (2.0 * self.c1 - 1.0) * slope >= new_slope && self.curvature_holds(slope, new_slope)
    }

    /// `∇f(x + αp)ᵀp ≥ c2·gᵀp`
    pub fn curvature_holds(&self, slope: f64, new_slope: f64) -> bool {
        new_slope >= self.c2 * slope
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    WolfeSatisfied,
    /// `f` changed by less than its round-off floor; accepted on the gradient test.
    ApproximateWolfe,
    /// Only sufficient decrease could be met; the largest such step is returned.
    ArmijoOnly,
    /// No trial produced sufficient decrease.
    Exhausted,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalCounts {
    pub f_count: usize,
    pub g_count: usize,
}

#[derive(Clone, Debug)]
pub struct LineSearchOutcome {
    pub alpha: f64,
    pub f_new: f64,
    pub grad_new: Vector,
    pub evals: EvalCounts,
    pub status: SearchStatus,
    pub trials: usize,
}

impl LineSearchOutcome {
    pub fn accepted(&self) -> bool {
        self.status != SearchStatus::Exhausted
    }
}

/// Changes in `f` below `ROUNDOFF_ULPS·ε·(1 + |f|)` are treated as noise.
pub const ROUNDOFF_ULPS: f64 = 8.0;

pub fn roundoff_floor(f_x: f64) -> f64 {
    ROUNDOFF_ULPS * f64::EPSILON * (1.0 + f_x.abs())
}

/// Finds `α ∈ (0, 1]` along the descent direction `p` from `x`.
///
/// Non-finite trial values count as failed trials. Errors are reserved for a
/// non-descent direction or a non-finite starting value.
pub fn wolfe_search<O: Objective + ?Sized>(
    f: &O,
    x: &Vector,
    p: &Vector,
    f_x: f64,
    g_x: &Vector,
    params: &WolfeParams,
) -> Result<LineSearchOutcome> {
    params.validate()?;
    if x.len() != p.len() || x.len() != g_x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: if x.len() != p.len() { p.len() } else { g_x.len() },
        });
    }
    if !f_x.is_finite() || !g_x.is_finite() {
        return Err(Error::NonFinite("line search start".into()));
    }
    let slope = g_x.dot(p);
    if !slope.is_finite() {
        return Err(Error::NonFinite("directional derivative".into()));
    }
    if slope >= 0.0 {
        return Err(Error::NotDescentDirection(slope));
    }

    let mut evals = EvalCounts::default();
    let mut alpha = 1.0;
    let mut first_armijo: Option<(f64, f64, Vector, usize)> = None;
    let noise = roundoff_floor(f_x);

    for trial in 1..=params.max_trials {
        let x_new = x.offset(alpha, p);
        let f_new = f.value(&x_new);
        evals.f_count += 1;
        if f_new.is_finite() && params.armijo_holds(f_x, slope, alpha, f_new) {
            let g_new = f.gradient(&x_new);
            evals.g_count += 1;
            if g_new.is_finite() {
                if params.curvature_holds(slope, g_new.dot(p)) {
                    return Ok(LineSearchOutcome {
                        alpha,
                        f_new,
                        grad_new: g_new,
                        evals,
                        status: SearchStatus::WolfeSatisfied,
                        trials: trial,
                    });
                }
                if first_armijo.is_none() {
                    first_armijo = Some((alpha, f_new, g_new, trial));
                }
            }
        } else if f_new.is_finite() && (f_new - f_x).abs() <= noise {
            let g_new = f.gradient(&x_new);
            evals.g_count += 1;
            if g_new.is_finite() && params.approximate_wolfe_holds(slope, g_new.dot(p)) {
                return Ok(LineSearchOutcome {
                    alpha,
                    f_new,
                    grad_new: g_new,
                    evals,
                    status: SearchStatus::ApproximateWolfe,
                    trials: trial,
                });
            }
        }
        alpha *= params.backtrack;
    }

    Ok(match first_armijo {
        Some((alpha, f_new, grad_new, _)) => LineSearchOutcome {
            alpha,
            f_new,
            grad_new,
            evals,
            status: SearchStatus::ArmijoOnly,
            trials: params.max_trials,
        },
        None => LineSearchOutcome {
            alpha: 0.0,
            f_new: f_x,
            grad_new: g_x.clone(),
            evals,
            status: SearchStatus::Exhausted,
            trials: params.max_trials,
        },
    })
}
