//! The 30-problem benchmark suite at n = 10.
//!
//! Formulas and starting points follow the standard unconstrained test
//! collection (Andrei, 2008). Indices in the formula docs are 1-based.
//! Every problem also carries the published BFGS / two-phase iteration
//! counts and timings as fixture metadata.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::objective::{check_gradient, Objective, DEFAULT_FD_STEP};

pub const SUITE_DIMENSION: usize = 10;
pub const GRADIENT_CHECK_TOL: f64 = 1e-5;
pub const GRADIENT_CHECK_SEED: u64 = 0x5EED_2017;
pub const GRADIENT_CHECK_PERTURBATIONS: usize = 5;

/// Published reference values for one problem (iterations and seconds).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub sl: usize,
    pub bfgs_iters: usize,
    pub bfgs_time_s: f64,
    pub twophase_iters: usize,
    pub twophase_time_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KnownOptimum {
    pub x: Vector,
    pub f: f64,
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    Any,
    /// Separable in consecutive pairs; n must be even.
    Pairs,
    AtLeast(usize),
}

/// A named test function of any admissible dimension.
#[derive(Clone)]
pub struct TestFunction {
    name: &'static str,
    n: usize,
    value: fn(&[f64]) -> f64,
    gradient: fn(&[f64]) -> Vec<f64>,
    start: fn(usize) -> Vec<f64>,
}

impl Objective for TestFunction {
    fn name(&self) -> &str {
        self.name
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }
    fn gradient(&self, x: &[f64]) -> Vector {
        (self.gradient)(x).into()
    }
    fn standard_start(&self) -> Vector {
        (self.start)(self.n).into()
    }
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction").field("name", &self.name).field("n", &self.n).finish()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteProblem {
    pub objective: TestFunction,
    pub table_row: TableRow,
    pub known_optimum: Option<KnownOptimum>,
    /// Human-readable formula, as implemented.
    pub formula: &'static str,
    aliases: &'static [&'static str],
    shape: Shape,
    optimum: fn(usize) -> Option<KnownOptimum>,
}

impl SuiteProblem {
    pub fn name(&self) -> &'static str {
        self.objective.name
    }

    pub fn dimension(&self) -> usize {
        self.objective.n
    }

    /// The same problem at another dimension. Table metadata is kept but only
    /// refers to n = 10.
    pub fn with_dimension(&self, n: usize) -> Result<SuiteProblem> {
        let ok = match self.shape {
            Shape::Any => n >= 1,
            Shape::Pairs => n >= 2 && n % 2 == 0,
            Shape::AtLeast(m) => n >= m,
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "{} is not defined at dimension {n}",
                self.name()
            )));
        }
        let mut p = self.clone();
        p.objective.n = n;
        p.known_optimum = (self.optimum)(n);
        Ok(p)
    }

    pub fn start_value(&self) -> f64 {
        self.objective.value(&self.objective.standard_start())
    }

    /// Standard start followed by the seeded perturbations used by the gradient gate.
    pub fn gradient_probe_points(&self) -> Vec<Vector> {
        probe_points(&self.objective.standard_start(), GRADIENT_CHECK_PERTURBATIONS, GRADIENT_CHECK_SEED)
    }
}

/// `x0` followed by `count` points `x0 + δ` with `δᵢ ~ U(−¼, ¼)·(1 + |x0ᵢ|)`.
pub fn probe_points(x0: &Vector, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![x0.clone()];
    for _ in 0..count {
        let p: Vec<f64> = x0
            .iter()
            .map(|&v| v + rng.gen_range(-0.25..0.25) * (1.0 + v.abs()))
            .collect();
        pts.push(p.into());
    }
    pts
}

/// The full suite in published table order, gradient-checked once on first use.
pub fn suite() -> &'static [SuiteProblem] {
    static SUITE: OnceLock<Vec<SuiteProblem>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let problems = build_suite();
        for p in &problems {
            let report = check_gradient(
                &p.objective,
                &p.gradient_probe_points(),
                DEFAULT_FD_STEP,
                GRADIENT_CHECK_TOL,
            )
            .unwrap_or_else(|e| panic!("{}: gradient check failed: {e}", p.name()));
            assert!(report.passed(), "{}: analytic gradient rejected: {report:?}", p.name());
        }
        problems
    })
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(|c| c.to_lowercase())
        .collect()
}

fn levenshtein(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != *cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

/// Case- and punctuation-insensitive lookup by name or alias.
pub fn lookup(name: &str) -> Result<&'static SuiteProblem> {
    let key = normalize(name);
    let all = suite();
    if let Some(p) = all.iter().find(|p| {
        normalize(p.name()) == key || p.aliases.iter().any(|a| normalize(a) == key)
    }) {
        return Ok(p);
    }
    let mut ranked: Vec<(usize, &str)> = all
        .iter()
        .map(|p| {
            let n = normalize(p.name());
            let d = if !key.is_empty() && n.contains(&key) { 0 } else { levenshtein(&key, &n) };
            (d, p.name())
        })
        .collect();
    ranked.sort();
    Err(Error::UnknownProblem {
        name: name.to_string(),
        suggestions: ranked.into_iter().take(3).map(|(_, n)| n.to_string()).collect(),
    })
}

/// `name,dimension,f_start,table_bfgs_iters,table_twophase_iters`
pub fn manifest_csv(problems: &[SuiteProblem]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "dimension", "f_start", "table_bfgs_iters", "table_twophase_iters"])?;
    for p in problems {
        w.write_record([
            p.name().to_string(),
            p.dimension().to_string(),
            format!("{:e}", p.start_value()),
            p.table_row.bfgs_iters.to_string(),
            p.table_row.twophase_iters.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn idx(i: usize) -> f64 {
    (i + 1) as f64
}

fn constant(v: f64) -> impl Fn(usize) -> Vec<f64> {
    move |n| vec![v; n]
}

fn alternating(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i % 2 == 0 { a } else { b }).collect()
}

fn at(x: Vec<f64>, f: f64) -> Option<KnownOptimum> {
    Some(KnownOptimum { x: x.into(), f })
}

// ---------------------------------------------------------------------------
// objectives
// ---------------------------------------------------------------------------

/// Σ i·xᵢ² + (x₁ + xₙ)²/100
fn apq(x: &[f64]) -> f64 {
    let n = x.len();
    x.iter().enumerate().map(|(i, v)| idx(i) * v * v).sum::<f64>() + 0.01 * (x[0] + x[n - 1]).powi(2)
}
fn apq_grad(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut g: Vec<f64> = x.iter().enumerate().map(|(i, v)| 2.0 * idx(i) * v).collect();
    let c = 0.02 * (x[0] + x[n - 1]);
    g[0] += c;
    g[n - 1] += c;
    g
}

/// Σ_{i<n} [(xᵢ² + xₙ²)² − 4xᵢ + 3]
fn arwhead(x: &[f64]) -> f64 {
    let n = x.len();
    let xn2 = x[n - 1] * x[n - 1];
    x[..n - 1].iter().map(|v| (v * v + xn2).powi(2) - 4.0 * v + 3.0).sum()
}
fn arwhead_grad(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let xn = x[n - 1];
    let mut g = vec![0.0; n];
    for i in 0..n - 1 {
        let q = x[i] * x[i] + xn * xn;
        g[i] = 4.0 * x[i] * q - 4.0;
        g[n - 1] += 4.0 * xn * q;
    }
    g
}

/// (x₁ − 1)² + Σ_{i<n} (x_{i+1} − xᵢ)² + (1 − xₙ)²
fn biggsb1(x: &[f64]) -> f64 {
    let n = x.len();
    (x[0] - 1.0).powi(2) + x.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() + (1.0 - x[n - 1]).powi(2)
}
fn biggsb1_grad(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut g = vec![0.0; n];
    g[0] += 2.0 * (x[0] - 1.0);
    for i in 0..n - 1 {
        let d = 2.0 * (x[i + 1] - x[i]);
        g[i + 1] += d;
        g[i] -= d;
    }
    g[n - 1] -= 2.0 * (1.0 - x[n - 1]);
    g
}

/// Σ (e^{xᵢ} − i·xᵢ)
fn diagonal1(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| v.exp() - idx(i) * v).sum()
}
fn diagonal1_grad(x: &[f64]) -> Vec<f64> {
    x.iter().enumerate().map(|(i, v)| v.exp() - idx(i)).collect()
}

/// Σ (e^{xᵢ} − xᵢ/i)
fn diagonal2(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| v.exp() - v / idx(i)).sum()
}
fn diagonal2_grad(x: &[f64]) -> Vec<f64> {
    x.iter().enumerate().map(|(i, v)| v.exp() - 1.0 / idx(i)).collect()
}

/// Σ (e^{xᵢ} − i·sin xᵢ)
fn diagonal3(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| v.exp() - idx(i) * v.sin()).sum()
}
fn diagonal3_grad(x: &[f64]) -> Vec<f64> {
    x.iter().enumerate().map(|(i, v)| v.exp() - idx(i) * v.cos()).collect()
}

/// Σ (e^{xᵢ} − 2xᵢ − xᵢ²)
fn diagonal7(x: &[f64]) -> f64 {
    x.iter().map(|v| v.exp() - 2.0 * v - v * v).sum()
}
fn diagonal7_grad(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.exp() - 2.0 - 2.0 * v).collect()
}

/// Σ_{i<n} (e^{xᵢ} − i·xᵢ) + 10000·xₙ²
fn diagonal9(x: &[f64]) -> f64 {
    let n = x.len();
    diagonal1(&x[..n - 1]) + 1e4 * x[n - 1] * x[n - 1]
}
fn diagonal9_grad(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut g = diagonal1_grad(&x[..n - 1]);
    g.push(2e4 * x[n - 1]);
    g
}

// DIXMAAN family, instance L: α = 1, β = γ = δ = 0.26, k = (2, 0, 0, 2).
const DIX_ALPHA: f64 = 1.0;
const DIX_BETA: f64 = 0.26;
const DIX_GAMMA: f64 = 0.26;
const DIX_DELTA: f64 = 0.26;
const DIX_K: [i32; 4] = [2, 0, 0, 2];

/// 1 + Σᵢ α xᵢ² (i/n)^k₁ + Σ_{i<n} β xᵢ² (x_{i+1} + x_{i+1}²)² (i/n)^k₂
///   + Σ_{i≤2m} γ xᵢ² x_{i+m}⁴ (i/n)^k₃ + Σ_{i≤m} δ xᵢ x_{i+2m} (i/n)^k₄,  m = ⌊n/3⌋
fn dixmaanl(x: &[f64]) -> f64 {
    let n = x.len();
    let m = n / 3;
    let nf = n as f64;
    let w = |i: usize, k: i32| (idx(i) / nf).powi(k);
    let mut f = 1.0;
    for i in 0..n {
        f += DIX_ALPHA * x[i] * x[i] * w(i, DIX_K[0]);
    }
    for i in 0..n - 1 {
        let u = x[i + 1] + x[i + 1] * x[i + 1];
        f += DIX_BETA * x[i] * x[i] * u * u * w(i, DIX_K[1]);
    }
    for i in 0..2 * m {
        f += DIX_GAMMA * x[i] * x[i] * x[i + m].powi(4) * w(i, DIX_K[2]);
    }
    for i in 0..m {
        f += DIX_DELTA * x[i] * x[i + 2 * m] * w(i, DIX_K[3]);
    }
    f
}
fn dixmaanl_grad(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let m = n / 3;
    let nf = n as f64;
    let w = |i: usize, k: i32| (idx(i) / nf).powi(k);
    let mut g = vec![0.0; n];
    for i in 0..n {
        g[i] += 2.0 * DIX_ALPHA * x[i] * w(i, DIX_K[0]);
    }
    for i in 0..n - 1 {
        let u = x[i + 1] + x[i + 1] * x[i + 1];
        let c = DIX_BETA * w(i, DIX_K[1]);
        g[i] += 2.0 * c * x[i] * u * u;
        g[i + 1] += 2.0 * c * x[i] * x[i] * u * (1.0 + 2.0 * x[i + 1]);
    }
    for i in 0..2 * m {
        let c = DIX_GAMMA * w(i, DIX_K[2]);
        g[i] += 2.0 * c * x[i] * x[i + m].powi(4);
        g[i + m] += 4.0 * c * x[i] * x[i] * x[i + m].powi(3);
    }
    for i in 0..m {
        let c = DIX_DELTA * w(i, DIX_K[3]);
        g[i] += c * x[i + 2 * m];
        g[i + 2 * m] += c * x[i];
    }
    g
}

/// Σ_{i≤n−2} (xᵢ² + 100·x_{i+1}² + 100·x_{i+2}²)
fn dqdrtic(x: &[f64]) -> f64 {
    x.windows(3).map(|w| w[0] * w[0] + 100.0 * w[1] * w[1] + 100.0 * w[2] * w[2]).sum()
}
fn dqdrtic_grad(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len().saturating_sub(2) {
        g[i] += 2.0 * x[i];
        g[i + 1] += 200.0 * x[i + 1];
        g[i + 2] += 200.0 * x[i + 2];
    }
    g
}

/// 16 + Σ_{i<n} [(xᵢ − 2)⁴ + (xᵢx_{i+1} − 2x_{i+1})² + (x_{i+1} + 1)²]
fn edensch(x: &[f64]) -> f64 {
    16.0 + x
        .windows(2)
        .map(|w| (w[0] - 2.0).powi(4) + (w[0] * w[1] - 2.0 * w[1]).powi(2) + (w[1] + 1.0).powi(2))
        .sum::<f64>()
}
fn edensch_grad(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() - 1 {
        let (a, b) = (x[i], x[i + 1]);
        let r = a * b - 2.0 * b;
        g[i] += 4.0 * (a - 2.0).powi(3) + 2.0 * r * b;
        g[i + 1] += 2.0 * r * (a - 2.0) + 2.0 * (b + 1.0);
    }
    g
}

/// Σ_{i<n} (xᵢ² + x_{i+1}²)² + Σ_{i<n} (−4xᵢ + 3)
fn engval1(x: &[f64]) -> f64 {
    x.windows(2).map(|w| (w[0] * w[0] + w[1] * w[1]).powi(2) - 4.0 * w[0] + 3.0).sum()
}
fn engval1_grad(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() - 1 {
        let q = x[i] * x[i] + x[i + 1] * x[i + 1];
        g[i] += 4.0 * x[i] * q - 4.0;
        g[i + 1] += 4.0 * x[i + 1] * q;
    }
    g
}

fn pairwise(x: &[f64], f: impl Fn(f64, f64) -> f64) -> f64 {
    x.chunks_exact(2).map(|c| f(c[0], c[1])).sum()
}

fn pairwise_grad(x: &[f64], g: impl Fn(f64, f64) -> (f64, f64)) -> Vec<f64> {
    x.chunks_exact(2)
        .flat_map(|c| {
            let (a, b) = g(c[0], c[1]);
            [a, b]
        })
        .collect()
}

/// Σ over pairs (a, b): (1.5 − a(1 − b))² + (2.25 − a(1 − b²))² + (2.625 − a(1 − b³))²
fn ext_beale(x: &[f64]) -> f64 {
    pairwise(x, |a, b| {
        (1.5 - a * (1.0 - b)).powi(2) + (2.25 - a * (1.0 - b * b)).powi(2) + (2.625 - a * (1.0 - b.powi(3))).powi(2)
    })
}
fn ext_beale_grad(x: &[f64]) -> Vec<f64> {
    pairwise_grad(x, |a, b| {
        let r1 = 1.5 - a * (1.0 - b);
        let r2 = 2.25 - a * (1.0 - b * b);
        let r3 = 2.625 - a * (1.0 - b.powi(3));
        let ga = -2.0 * (r1 * (1.0 - b) + r2 * (1.0 - b * b) + r3 * (1.0 - b.powi(3)));
        let gb = 2.0 * (r1 * a + r2 * 2.0 * a * b + r3 * 3.0 * a * b * b);
        (ga, gb)
    })
}

/// Σ over pairs: (a − 2)² + (a − 2)²b² + (b + 1)²
fn ext_denschnb(x: &[f64]) -> f64 {
    pairwise(x, |a, b| (a - 2.0).powi(2) * (1.0 + b * b) + (b + 1.0).powi(2))
}
fn ext_denschnb_grad(x: &[f64]) -> Vec<f64> {
    pairwise_grad(x, |a, b| {
        (2.0 * (a - 2.0) * (1.0 + b * b), 2.0 * (a - 2.0).powi(2) * b + 2.0 * (b + 1.0))
    })
}

/// Σ over pairs: (−13 + a + ((5 − b)b − 2)b)² + (−29 + a + ((b + 1)b − 14)b)²
fn ext_freud_roth(x: &[f64]) -> f64 {
    pairwise(x, |a, b| {
        (-13.0 + a + ((5.0 - b) * b - 2.0) * b).powi(2) + (-29.0 + a + ((b + 1.0) * b - 14.0) * b).powi(2)
    })
}
fn ext_freud_roth_grad(x: &[f64]) -> Vec<f64> {
    pairwise_grad(x, |a, b| {
        let r1 = -13.0 + a + ((5.0 - b) * b - 2.0) * b;
        let r2 = -29.0 + a + ((b + 1.0) * b - 14.0) * b;
        let d1 = 10.0 * b - 3.0 * b * b - 2.0;
        let d2 = 3.0 * b * b + 2.0 * b - 14.0;
        (2.0 * (r1 + r2), 2.0 * (r1 * d1 + r2 * d2))
    })
}

/// Σ over pairs: (a² + b² + ab)² + sin²a + cos²b
fn ext_psc1(x: &[f64]) -> f64 {
    pairwise(x, |a, b| (a * a + b * b + a * b).powi(2) + a.sin().powi(2) + b.cos().powi(2))
}
fn ext_psc1_grad(x: &[f64]) -> Vec<f64> {
    pairwise_grad(x, |a, b| {
        let q = a * a + b * b + a * b;
        (
            2.0 * q * (2.0 * a + b) + (2.0 * a).sin(),
            2.0 * q * (2.0 * b + a) - (2.0 * b).sin(),
        )
    })
}

/// Σ over pairs: (a + b − 3)² + (a − b + 1)⁴
fn ext_tridiag1(x: &[f64]) -> f64 {
    pairwise(x, |a, b| (a + b - 3.0).powi(2) + (a - b + 1.0).powi(4))
}
fn ext_tridiag1_grad(x: &[f64]) -> Vec<f64> {
    pairwise_grad(x, |a, b| {
        let u = 2.0 * (a + b - 3.0);
        let v = 4.0 * (a - b + 1.0).powi(3);
        (u + v, u - v)
    })
}

const EXT_TRIDIAG2_C: f64 = 0.1;

/// Σ_{i<n} [(xᵢx_{i+1} − 1)² + c(xᵢ + 1)(x_{i+1} + 1)],  c = 0.1
fn ext_tridiag2(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| (w[0] * w[1] - 1.0).powi(2) + EXT_TRIDIAG2_C * (w[0] + 1.0) * (w[1] + 1.0))
        .sum()
}
fn ext_tridiag2_grad(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() - 1 {
        let r = x[i] * x[i + 1] - 1.0;
        g[i] += 2.0 * r * x[i + 1] + EXT_TRIDIAG2_C * (x[i + 1] + 1.0);
        g[i + 1] += 2.0 * r * x[i] + EXT_TRIDIAG2_C * (x[i] + 1.0);
    }
    g
}

/// Σ_{i<n} 100·(x_{i+1} − xᵢ + 1 − xᵢ²)²   (FLETCHCR)
fn fletchcr(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] + 1.0 - w[0] * w[0]).powi(2)).sum()
}
fn fletchcr_grad(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() - 1 {
        let r = 200.0 * (x[i + 1] - x[i] + 1.0 - x[i] * x[i]);
        g[i] += r * (-1.0 - 2.0 * x[i]);
        g[i + 1] += r;
    }
    g
}

/// Σ_{i<n} [(xᵢ² + x_{i+1}² + xᵢx_{i+1})² + sin²xᵢ + cos²xᵢ]
fn gen_psc1(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| (w[0] * w[0] + w[1] * w[1] + w[0] * w[1]).powi(2) + w[0].sin().powi(2) + w[0].cos().powi(2))
        .sum()
}
fn gen_psc1_grad(x: &[f64]) -> Vec<f64> {
    // the trigonometric pair sums to one and drops out of the gradient
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() - 1 {
        let (a, b) = (x[i], x[i + 1]);
        let q = 2.0 * (a * a + b * b + a * b);
        g[i] += q * (2.0 * a + b);
        g[i + 1] += q * (2.0 * b + a);
    }
    g
}

/// Σ (e^{xᵢ} − √i·xᵢ)
fn hager(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| v.exp() - idx(i).sqrt() * v).sum()
}
fn hager_grad(x: &[f64]) -> Vec<f64> {
    x.iter().enumerate().map(|(i, v)| v.exp() - idx(i).sqrt()).collect()
}

/// Σ over pairs: −3a − 2b + 2 + a³ + b²
fn himmelh(x: &[f64]) -> f64 {
    pairwise(x, |a, b| -3.0 * a - 2.0 * b + 2.0 + a.powi(3) + b * b)
}
fn himmelh_grad(x: &[f64]) -> Vec<f64> {
    pairwise_grad(x, |a, b| (3.0 * a * a - 3.0, 2.0 * b - 2.0))
}

/// x₁² + Σ_{i=2}^{n} [i·xᵢ² + (x₁ + … + xᵢ)²/100]
fn ppq(x: &[f64]) -> f64 {
    let mut f = x[0] * x[0];
    let mut s = x[0];
    for i in 1..x.len() {
        s += x[i];
        f += idx(i) * x[i] * x[i] + 0.01 * s * s;
    }
    f
}
fn ppq_grad(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut prefix = vec![0.0; n];
    let mut s = 0.0;
    for i in 0..n {
        s += x[i];
        prefix[i] = s;
    }
    // tail[j] = Σ_{i ≥ max(j, 2nd index)} prefix[i]
    let mut g = vec![0.0; n];
    let mut tail = 0.0;
    for j in (0..n).rev() {
        if j >= 1 {
            tail += prefix[j];
        }
        g[j] = 0.02 * tail + 2.0 * idx(j) * x[j];
    }
    g[0] = 2.0 * x[0] + 0.02 * tail;
    g
}

/// (Σ xᵢ)² + Σ (i/100)·xᵢ²
fn pqd(x: &[f64]) -> f64 {
    x.iter().sum::<f64>().powi(2) + x.iter().enumerate().map(|(i, v)| idx(i) / 100.0 * v * v).sum::<f64>()
}
fn pqd_grad(x: &[f64]) -> Vec<f64> {
    let s = 2.0 * x.iter().sum::<f64>();
    x.iter().enumerate().map(|(i, v)| s + idx(i) / 50.0 * v).collect()
}

/// x₁² + Σ_{i=2}^{n−1} [i·xᵢ² + (x_{i−1} + xᵢ + x_{i+1})²]
fn ptq(x: &[f64]) -> f64 {
    let n = x.len();
    x[0] * x[0] + (1..n - 1).map(|i| idx(i) * x[i] * x[i] + (x[i - 1] + x[i] + x[i + 1]).powi(2)).sum::<f64>()
}
fn ptq_grad(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut g = vec![0.0; n];
    g[0] = 2.0 * x[0];
    for i in 1..n - 1 {
        g[i] += 2.0 * idx(i) * x[i];
        let t = 2.0 * (x[i - 1] + x[i] + x[i + 1]);
        g[i - 1] += t;
        g[i] += t;
        g[i + 1] += t;
    }
    g
}

/// ½ Σ i·xᵢ² − xₙ
fn qf1(x: &[f64]) -> f64 {
    0.5 * x.iter().enumerate().map(|(i, v)| idx(i) * v * v).sum::<f64>() - x[x.len() - 1]
}
fn qf1_grad(x: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = x.iter().enumerate().map(|(i, v)| idx(i) * v).collect();
    *g.last_mut().unwrap() -= 1.0;
    g
}

/// ½ Σ i·(xᵢ² − 1)² − xₙ
fn qf2(x: &[f64]) -> f64 {
    0.5 * x.iter().enumerate().map(|(i, v)| idx(i) * (v * v - 1.0).powi(2)).sum::<f64>() - x[x.len() - 1]
}
fn qf2_grad(x: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = x.iter().enumerate().map(|(i, v)| 2.0 * idx(i) * v * (v * v - 1.0)).collect();
    *g.last_mut().unwrap() -= 1.0;
    g
}

/// Σ (i/10)(e^{xᵢ} − xᵢ)
fn raydan1(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| idx(i) / 10.0 * (v.exp() - v)).sum()
}
fn raydan1_grad(x: &[f64]) -> Vec<f64> {
    x.iter().enumerate().map(|(i, v)| idx(i) / 10.0 * (v.exp() - 1.0)).collect()
}

/// Σ (e^{xᵢ} − xᵢ)
fn raydan2(x: &[f64]) -> f64 {
    x.iter().map(|v| v.exp() - v).sum()
}
fn raydan2_grad(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.exp() - 1.0).collect()
}

/// (x₁ − 1)² + Σ_{i=2}^{n} i·(2xᵢ − x_{i−1})²
fn tridia(x: &[f64]) -> f64 {
    (x[0] - 1.0).powi(2) + (1..x.len()).map(|i| idx(i) * (2.0 * x[i] - x[i - 1]).powi(2)).sum::<f64>()
}
fn tridia_grad(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    g[0] = 2.0 * (x[0] - 1.0);
    for i in 1..x.len() {
        let r = 2.0 * idx(i) * (2.0 * x[i] - x[i - 1]);
        g[i] += 2.0 * r;
        g[i - 1] -= r;
    }
    g
}

#[allow(clippy::too_many_arguments)]
fn problem(
    name: &'static str,
    aliases: &'static [&'static str],
    formula: &'static str,
    shape: Shape,
    value: fn(&[f64]) -> f64,
    gradient: fn(&[f64]) -> Vec<f64>,
    start: fn(usize) -> Vec<f64>,
    optimum: fn(usize) -> Option<KnownOptimum>,
    row: (usize, usize, f64, usize, f64),
) -> SuiteProblem {
    SuiteProblem {
        objective: TestFunction {
            name,
            n: SUITE_DIMENSION,
            value,
            gradient,
            start,
        },
        table_row: TableRow {
            sl: row.0,
            bfgs_iters: row.1,
            bfgs_time_s: row.2,
            twophase_iters: row.3,
            twophase_time_s: row.4,
        },
        known_optimum: optimum(SUITE_DIMENSION),
        formula,
        aliases,
        shape,
        optimum,
    }
}

fn build_suite() -> Vec<SuiteProblem> {
    vec![
        problem(
            "Almost Perturbed Quadratic",
            &["APQ"],
            "sum i*x_i^2 + (x_1 + x_n)^2/100; x0 = 0.5",
            Shape::Any,
            apq,
            apq_grad,
            |n| constant(0.5)(n),
            |n| at(vec![0.0; n], 0.0),
            (1, 18, 20.084107, 15, 15.409993),
        ),
        problem(
            "ARWHEAD",
            &[],
            "sum_{i<n} (x_i^2 + x_n^2)^2 - 4x_i + 3; x0 = 1",
            Shape::AtLeast(2),
            arwhead,
            arwhead_grad,
            |n| constant(1.0)(n),
            |n| {
                let mut x = vec![1.0; n];
                x[n - 1] = 0.0;
                at(x, 0.0)
            },
            (2, 7, 10.222042, 7, 6.131260),
        ),
        problem(
            "BIGGSB1",
            &[],
            "(x_1-1)^2 + sum_{i<n} (x_{i+1}-x_i)^2 + (1-x_n)^2; x0 = 0",
            Shape::Any,
            biggsb1,
            biggsb1_grad,
            |n| constant(0.0)(n),
            |n| at(vec![1.0; n], 0.0),
            (3, 12, 4.871641, 11, 6.353324),
        ),
        problem(
            "Diagonal 1",
            &["DIAG1"],
            "sum exp(x_i) - i*x_i; x0 = 1/n",
            Shape::Any,
            diagonal1,
            diagonal1_grad,
            |n| vec![1.0 / n as f64; n],
            |n| {
                let x: Vec<f64> = (0..n).map(|i| idx(i).ln()).collect();
                let f = (0..n).map(|i| idx(i) - idx(i) * idx(i).ln()).sum();
                at(x, f)
            },
            (4, 17, 25.438489, 13, 23.955075),
        ),
        problem(
            "Diagonal 2",
            &["DIAG2"],
            "sum exp(x_i) - x_i/i; x0_i = 1/i",
            Shape::Any,
            diagonal2,
            diagonal2_grad,
            |n| (0..n).map(|i| 1.0 / idx(i)).collect(),
            |n| {
                let x: Vec<f64> = (0..n).map(|i| -idx(i).ln()).collect();
                let f = (0..n).map(|i| (1.0 + idx(i).ln()) / idx(i)).sum();
                at(x, f)
            },
            (5, 23, 11.601469, 22, 15.697982),
        ),
        problem(
            "Diagonal 3",
            &["DIAG3"],
            "sum exp(x_i) - i*sin(x_i); x0 = 1",
            Shape::Any,
            diagonal3,
            diagonal3_grad,
            |n| constant(1.0)(n),
            |_| None,
            (6, 19, 14.133412, 14, 26.880991),
        ),
        problem(
            "Diagonal 7",
            &["DIAG7"],
            "sum exp(x_i) - 2x_i - x_i^2; x0 = 0.5",
            Shape::Any,
            diagonal7,
            diagonal7_grad,
            |n| constant(0.5)(n),
            |_| None,
            (7, 5, 7.324530, 7, 7.011224),
        ),
        problem(
            "Diagonal 9",
            &["DIAG9"],
            "sum_{i<n} exp(x_i) - i*x_i + 10000*x_n^2; x0 = 1",
            Shape::AtLeast(2),
            diagonal9,
            diagonal9_grad,
            |n| constant(1.0)(n),
            |n| {
                let mut x: Vec<f64> = (0..n).map(|i| idx(i).ln()).collect();
                x[n - 1] = 0.0;
                let f = (0..n - 1).map(|i| idx(i) - idx(i) * idx(i).ln()).sum();
                at(x, f)
            },
            (8, 22, 16.894874, 14, 23.560161),
        ),
        problem(
            "DIXMAANL",
            &["DIXMANNA DIXMAANL", "DIXMAAN-L"],
            "DIXMAAN family, L instance: alpha=1, beta=gamma=delta=0.26, k=(2,0,0,2), m=floor(n/3); x0 = 2",
            Shape::AtLeast(3),
            dixmaanl,
            dixmaanl_grad,
            |n| constant(2.0)(n),
            |n| at(vec![0.0; n], 1.0),
            (9, 12, 18.307508, 11, 18.078639),
        ),
        problem(
            "DQDRTIC",
            &[],
            "sum_{i<=n-2} x_i^2 + 100 x_{i+1}^2 + 100 x_{i+2}^2; x0 = 3",
            Shape::AtLeast(3),
            dqdrtic,
            dqdrtic_grad,
            |n| constant(3.0)(n),
            |n| at(vec![0.0; n], 0.0),
            (10, 13, 27.743780, 20, 26.610668),
        ),
        problem(
            "EDENSCH",
            &[],
            "16 + sum_{i<n} (x_i-2)^4 + (x_i x_{i+1} - 2x_{i+1})^2 + (x_{i+1}+1)^2; x0 = 0",
            Shape::AtLeast(2),
            edensch,
            edensch_grad,
            |n| constant(0.0)(n),
            |_| None,
            (11, 23, 29.752709, 18, 29.497861),
        ),
        problem(
            "ENGVAL1",
            &[],
            "sum_{i<n} (x_i^2 + x_{i+1}^2)^2 - 4x_i + 3; x0 = 2",
            Shape::AtLeast(2),
            engval1,
            engval1_grad,
            |n| constant(2.0)(n),
            |_| None,
            (12, 30, 29.388006, 25, 51.026493),
        ),
        problem(
            "Extended Beale",
            &["BEALE"],
            "pairs: (1.5 - a(1-b))^2 + (2.25 - a(1-b^2))^2 + (2.625 - a(1-b^3))^2; x0 = (1, 0.8)",
            Shape::Pairs,
            ext_beale,
            ext_beale_grad,
            |n| alternating(1.0, 0.8, n),
            |n| at(alternating(3.0, 0.5, n), 0.0),
            (13, 22, 17.23462331, 20, 34.315333),
        ),
        problem(
            "Extended DENSCHNB",
            &["DENSCHNB"],
            "pairs: (a-2)^2 + (a-2)^2 b^2 + (b+1)^2; x0 = 1",
            Shape::Pairs,
            ext_denschnb,
            ext_denschnb_grad,
            |n| constant(1.0)(n),
            |n| at(alternating(2.0, -1.0, n), 0.0),
            (14, 7, 8.237664028, 7, 16.228143),
        ),
        problem(
            "Extended Freudenstein and Roth",
            &["Extended Freudenstein & Roth", "Freudenstein Roth"],
            "pairs: (-13 + a + ((5-b)b - 2)b)^2 + (-29 + a + ((b+1)b - 14)b)^2; x0 = (0.5, -2)",
            Shape::Pairs,
            ext_freud_roth,
            ext_freud_roth_grad,
            |n| alternating(0.5, -2.0, n),
            |n| at(alternating(5.0, 4.0, n), 0.0),
            (15, 10, 8.573212, 9, 7.694981),
        ),
        problem(
            "Extended PSC1",
            &[],
            "pairs: (a^2 + b^2 + ab)^2 + sin^2 a + cos^2 b; x0 = (3, 0.1)",
            Shape::Pairs,
            ext_psc1,
            ext_psc1_grad,
            |n| alternating(3.0, 0.1, n),
            |_| None,
            (16, 13, 11.365949, 12, 10.933492),
        ),
        problem(
            "Extended Tridiagonal 1",
            &[],
            "pairs: (a + b - 3)^2 + (a - b + 1)^4; x0 = 2",
            Shape::Pairs,
            ext_tridiag1,
            ext_tridiag1_grad,
            |n| constant(2.0)(n),
            |n| at(alternating(1.0, 2.0, n), 0.0),
            (17, 21, 15.855021, 20, 12.977472),
        ),
        problem(
            "Extended Tridiagonal 2",
            &[],
            "sum_{i<n} (x_i x_{i+1} - 1)^2 + 0.1 (x_i + 1)(x_{i+1} + 1); x0 = 1",
            Shape::AtLeast(2),
            ext_tridiag2,
            ext_tridiag2_grad,
            |n| constant(1.0)(n),
            |_| None,
            (18, 11, 6.7415813, 9, 9.071257),
        ),
        problem(
            "Fletcher",
            &["FLETCHCR"],
            "FLETCHCR: sum_{i<n} 100 (x_{i+1} - x_i + 1 - x_i^2)^2; x0 = 0",
            Shape::AtLeast(2),
            fletchcr,
            fletchcr_grad,
            |n| constant(0.0)(n),
            |n| at(vec![1.0; n], 0.0),
            (19, 28, 35.639960, 25, 47.106851),
        ),
        problem(
            "Generalized PSC1",
            &[],
            "sum_{i<n} (x_i^2 + x_{i+1}^2 + x_i x_{i+1})^2 + sin^2 x_i + cos^2 x_i; x0 = (3, 0.1)",
            Shape::AtLeast(2),
            gen_psc1,
            gen_psc1_grad,
            |n| alternating(3.0, 0.1, n),
            |n| at(vec![0.0; n], (n - 1) as f64),
            (20, 23, 27.241052, 14, 27.129654),
        ),
        problem(
            "Hager",
            &[],
            "sum exp(x_i) - sqrt(i) x_i; x0 = 1",
            Shape::Any,
            hager,
            hager_grad,
            |n| constant(1.0)(n),
            |n| {
                let x: Vec<f64> = (0..n).map(|i| 0.5 * idx(i).ln()).collect();
                let f = (0..n).map(|i| idx(i).sqrt() * (1.0 - 0.5 * idx(i).ln())).sum();
                at(x, f)
            },
            (21, 17, 17.911313, 8, 15.208549),
        ),
        problem(
            "HIMMELH",
            &[],
            "pairs: -3a - 2b + 2 + a^3 + b^2; x0 = 1.5",
            Shape::Pairs,
            himmelh,
            himmelh_grad,
            |n| constant(1.5)(n),
            |n| at(vec![1.0; n], -((n / 2) as f64)),
            (22, 7, 10.81266821, 6, 5.727413),
        ),
        problem(
            "Partial Perturbed Quadratic",
            &["PPQ"],
            "x_1^2 + sum_{i=2}^n i x_i^2 + (x_1 + ... + x_i)^2/100; x0 = 0.5",
            Shape::AtLeast(2),
            ppq,
            ppq_grad,
            |n| constant(0.5)(n),
            |n| at(vec![0.0; n], 0.0),
            (23, 16, 18.650512, 16, 16.474436),
        ),
        problem(
            "Perturbed Quadratic Diagonal",
            &["PQD"],
            "(sum x_i)^2 + sum (i/100) x_i^2; x0 = 0.5",
            Shape::Any,
            pqd,
            pqd_grad,
            |n| constant(0.5)(n),
            |n| at(vec![0.0; n], 0.0),
            (24, 10, 11.815186, 5, 7.448544),
        ),
        problem(
            "Perturbed Tridiagonal Quadratic",
            &["PTQ"],
            "x_1^2 + sum_{i=2}^{n-1} i x_i^2 + (x_{i-1} + x_i + x_{i+1})^2; x0 = 0.5",
            Shape::AtLeast(3),
            ptq,
            ptq_grad,
            |n| constant(0.5)(n),
            |n| at(vec![0.0; n], 0.0),
            (25, 18, 18.504252, 14, 22.422385),
        ),
        problem(
            "Quadratic QF1",
            &["QF1"],
            "1/2 sum i x_i^2 - x_n; x0 = 1",
            Shape::Any,
            qf1,
            qf1_grad,
            |n| constant(1.0)(n),
            |n| {
                let mut x = vec![0.0; n];
                x[n - 1] = 1.0 / n as f64;
                at(x, -0.5 / n as f64)
            },
            (26, 16, 27.166675, 11, 15.076536),
        ),
        problem(
            "Quadratic QF2",
            &["QF2"],
            "1/2 sum i (x_i^2 - 1)^2 - x_n; x0 = 0.5",
            Shape::Any,
            qf2,
            qf2_grad,
            |n| constant(0.5)(n),
            |_| None,
            (27, 23, 36.647364, 17, 28.013425),
        ),
        problem(
            "Raydan1",
            &["Raydan 1"],
            "sum (i/10)(exp(x_i) - x_i); x0 = 1",
            Shape::Any,
            raydan1,
            raydan1_grad,
            |n| constant(1.0)(n),
            |n| at(vec![0.0; n], (1..=n).map(|i| i as f64 / 10.0).sum()),
            (28, 18, 14.126658, 16, 19.135894),
        ),
        problem(
            "Raydan2",
            &["Raydan 2"],
            "sum exp(x_i) - x_i; x0 = 1",
            Shape::Any,
            raydan2,
            raydan2_grad,
            |n| constant(1.0)(n),
            |n| at(vec![0.0; n], n as f64),
            (29, 7, 8.412570, 5, 8.376115),
        ),
        problem(
            "Tridia",
            &["TRIDIA"],
            "(x_1 - 1)^2 + sum_{i=2}^n i (2x_i - x_{i-1})^2; x0 = 1",
            Shape::AtLeast(2),
            tridia,
            tridia_grad,
            |n| constant(1.0)(n),
            |n| at((0..n).map(|i| 0.5f64.powi(i as i32)).collect(), 0.0),
            (30, 15, 16.038225, 16, 18.414270),
        ),
    ]
}
