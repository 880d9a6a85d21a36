//! Differentiable objectives and the central-difference gradient check.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::linalg::Vector;

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// A smooth objective `f: Rⁿ → R` with an analytic gradient.
///
/// Implementations must be pure so the same objective can be evaluated from
/// several threads at once.
pub trait Objective: Send + Sync {
    fn name(&self) -> &str;
    fn dimension(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vector;
    fn standard_start(&self) -> Vector;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vector {
        (**self).gradient(x)
    }
    fn standard_start(&self) -> Vector {
        (**self).standard_start()
    }
}

/// Objective assembled from a pair of closures.
pub struct FnObjective<F, G> {
    name: String,
    start: Vector,
    value: F,
    gradient: G,
}

impl<F, G> FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64]) -> Vec<f64> + Send + Sync,
{
    pub fn new(name: impl Into<String>, start: impl Into<Vector>, value: F, gradient: G) -> Self {
        FnObjective {
            name: name.into(),
            start: start.into(),
            value,
            gradient,
        }
    }
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64]) -> Vec<f64> + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }
    fn dimension(&self) -> usize {
        self.start.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }
    fn gradient(&self, x: &[f64]) -> Vector {
        (self.gradient)(x).into()
    }
    fn standard_start(&self) -> Vector {
        self.start.clone()
    }
}

/// Wraps an objective and counts every value and gradient call.
pub struct Counting<O> {
    inner: O,
    values: AtomicUsize,
    gradients: AtomicUsize,
}

impl<O: Objective> Counting<O> {
    pub fn new(inner: O) -> Self {
        Counting {
            inner,
            values: AtomicUsize::new(0),
            gradients: AtomicUsize::new(0),
        }
    }

    pub fn value_calls(&self) -> usize {
        self.values.load(Ordering::Relaxed)
    }

    pub fn gradient_calls(&self) -> usize {
        self.gradients.load(Ordering::Relaxed)
    }
}

impl<O: Objective> Objective for Counting<O> {
    fn name(&self) -> &str {
        self.inner.name()
    }
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.values.fetch_add(1, Ordering::Relaxed);
        self.inner.value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vector {
        self.gradients.fetch_add(1, Ordering::Relaxed);
        self.inner.gradient(x)
    }
    fn standard_start(&self) -> Vector {
        self.inner.standard_start()
    }
}

/// Central-difference gradient `(f(x + h eᵢ) − f(x − h eᵢ)) / 2h`.
pub fn fd_gradient<O: Objective + ?Sized>(f: &O, x: &Vector, h: f64) -> Result<Vector> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("finite-difference step {h}")));
    }
    let mut probe = x.clone();
    let mut g = Vector::zeros(x.len());
    for i in 0..x.len() {
        let xi = probe[i];
        probe[i] = xi + h;
        let fp = f.value(&probe);
        probe[i] = xi - h;
        let fm = f.value(&probe);
        probe[i] = xi;
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::NonFinite(format!(
                "{} evaluated near coordinate {i} of {x:?}",
                f.name()
            )));
        }
        g[i] = (fp - fm) / (2.0 * h);
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradientCheckReport {
    /// Largest `‖g − g_fd‖ / max(1, ‖g_fd‖)` over all probe points.
    pub max_rel_error: f64,
    /// Coordinate with the largest absolute discrepancy at the worst point.
    pub worst_coordinate: usize,
    pub worst_point: usize,
    pub probe_points: usize,
    pub tol: f64,
}

impl GradientCheckReport {
    pub fn passed(&self) -> bool {
        self.max_rel_error <= self.tol
    }
}

/// Compares the analytic gradient against [`fd_gradient`] at every point.
pub fn check_gradient<O: Objective + ?Sized>(
    f: &O,
    points: &[Vector],
    h: f64,
    tol: f64,
) -> Result<GradientCheckReport> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("gradient check needs at least one point".into()));
    }
    let mut report = GradientCheckReport {
        max_rel_error: 0.0,
        worst_coordinate: 0,
        worst_point: 0,
        probe_points: points.len(),
        tol,
    };
    for (p, x) in points.iter().enumerate() {
        let g = f.gradient(x);
        if g.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                actual: g.len(),
            });
        }
        if !g.is_finite() {
            return Err(Error::NonFinite(format!("{} gradient at point {p}: {x:?}", f.name())));
        }
        let fd = fd_gradient(f, x, h)
            .map_err(|e| Error::NonFinite(format!("point {p}: {e}")))?;
        let diff = g.sub(&fd);
        let err = diff.norm() / fd.norm().max(1.0);
        if p == 0 || err > report.max_rel_error {
            report.max_rel_error = err;
            report.worst_point = p;
            report.worst_coordinate = diff
                .iter()
                .enumerate()
                .fold((0, 0.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) })
                .0;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_sq() -> impl Objective {
        FnObjective::new(
            "half_sq",
            [1.0, 2.0],
            |x: &[f64]| 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            |x: &[f64]| x.to_vec(),
        )
    }

    #[test]
    fn fd_of_quadratic() {
        let g = fd_gradient(&half_sq(), &Vector::from([1.0, 2.0]), 1e-5).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-9 && (g[1] - 2.0).abs() < 1e-9, "{g:?}");
    }

    #[test]
    fn fd_of_product() {
        let f = FnObjective::new("prod", [3.0, 4.0], |x: &[f64]| x[0] * x[1], |x: &[f64]| vec![x[1], x[0]]);
        let g = fd_gradient(&f, &Vector::from([3.0, 4.0]), 1e-5).unwrap();
        assert!((g[0] - 4.0).abs() < 1e-9 && (g[1] - 3.0).abs() < 1e-9, "{g:?}");
    }

    #[test]
    fn fd_of_constant_is_zero() {
        let f = FnObjective::new("c", [0.3, -7.0, 2.0], |_: &[f64]| 4.2, |x: &[f64]| vec![0.0; x.len()]);
        let g = fd_gradient(&f, &Vector::from([0.3, -7.0, 2.0]), 1e-6).unwrap();
        assert!(g.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn fd_rejects_bad_step_and_nan() {
        assert!(fd_gradient(&half_sq(), &Vector::from([1.0, 2.0]), 0.0).is_err());
        let f = FnObjective::new("log", [0.0], |x: &[f64]| x[0].ln(), |x: &[f64]| vec![1.0 / x[0]]);
        assert!(matches!(fd_gradient(&f, &Vector::from([0.0]), 1e-6), Err(Error::NonFinite(_))));
    }

    #[test]
    fn check_passes_correct_gradient() {
        let pts = vec![Vector::from([1.0, 2.0]), Vector::from([-3.0, 0.5])];
        let r = check_gradient(&half_sq(), &pts, 1e-6, 1e-5).unwrap();
        assert!(r.max_rel_error <= 1e-7, "{r:?}");
        assert!(r.passed());
        assert_eq!(r.probe_points, 2);
    }

    #[test]
    fn check_flags_sign_flip() {
        let f = FnObjective::new(
            "flipped",
            [1.0, 2.0],
            |x: &[f64]| 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            |x: &[f64]| x.iter().map(|v| -v).collect(),
        );
        let x = Vector::from([1.0, 2.0]);
        let r = check_gradient(&f, &[x.clone()], 1e-6, 1e-5).unwrap();
        // 2‖g‖ / max(1, ‖g‖) = 2 since ‖g‖ = √5 > 1
        assert!((r.max_rel_error - 2.0).abs() < 1e-6, "{r:?}");
        assert!(!r.passed());
        assert_eq!(r.worst_coordinate, 1);
    }

    #[test]
    fn check_constant_is_exact() {
        let f = FnObjective::new("c", [1.0], |_: &[f64]| 1.0, |_: &[f64]| vec![0.0]);
        let r = check_gradient(&f, &[Vector::from([1.0])], 1e-6, 1e-5).unwrap();
        assert_eq!(r.max_rel_error, 0.0);
    }

    #[test]
    fn check_reports_offending_point() {
        let f = FnObjective::new("log", [1.0], |x: &[f64]| x[0].ln(), |x: &[f64]| vec![1.0 / x[0]]);
        let err = check_gradient(&f, &[Vector::from([1.0]), Vector::from([-1.0])], 1e-6, 1e-5).unwrap_err();
        assert!(err.to_string().contains("point 1"), "{err}");
        assert!(check_gradient(&f, &[], 1e-6, 1e-5).is_err());
    }

    #[test]
    fn counting_wrapper_counts() {
        let f = Counting::new(half_sq());
        let x = [1.0, 1.0];
        f.value(&x);
        f.value(&x);
        f.gradient(&x);
        assert_eq!((f.value_calls(), f.gradient_calls()), (2, 1));
    }
}
