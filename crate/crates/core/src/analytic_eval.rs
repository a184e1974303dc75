//! Smoothing kernel, the oscillatory integral `I(x)` and the exponential
//! sums `L(x)`, `L±(x)`, `T(x)`, with the finite-scale checks built on them.
//!
//! Every sum is stored as a list of [`Term`]s `(u, w)` and evaluated as
//! `Σ w e(u x)`. Grid scans run in parallel over `x` and reduce in a fixed
//! order, so results do not depend on the thread count.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::prime_tables::{PrimeTable, TableError};
use crate::quadrature::GaussLegendre;
use crate::rosser_sieve::{RosserWeights, Side};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("X = {x} exceeds the prime table limit {limit}")]
    Range { x: f64, limit: u64 },
    #[error("oscillation budget exceeded: {needed:.3e} panels needed, budget {budget:.3e}; lower |x| or X")]
    Oscillation { needed: f64, budget: f64 },
    #[error("invalid kernel: {0}")]
    Kernel(String),
    #[error("invalid weights: {0}")]
    Weights(String),
    #[error("invalid context: {0}")]
    Context(String),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// `e(θ) = exp(2πiθ)`.
pub fn e(theta: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * theta).sin_cos();
    Complex64::new(c, s)
}

/// `e(u x)` with the phase reduced mod 1 before scaling by `2π`.
/// The product error is recovered with an FMA so large `u x` keeps its fractional part.
pub fn e_prod(u: f64, x: f64) -> Complex64 {
    let t = u * x;
    let err = u.mul_add(x, -t);
    e((t - t.round()) + err)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothingKernel {
    pub a: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    pub r: u32,
}

impl SmoothingKernel {
    pub fn new(a: f64, delta: f64, r: u32) -> Result<Self, EvalError> {
        if !(delta > 0.0 && delta < a) {
            return Err(EvalError::Kernel(format!("need 0 < Delta < a, got Delta = {delta}, a = {a}")));
        }
        if r == 0 {
            return Err(EvalError::Kernel("r must be at least 1".into()));
        }
        Ok(SmoothingKernel { a, delta, r })
    }

    /// The bound `min(2a, 1/(π|x|), (1/(π|x|)) (r/(2π|x|Δ))^r)`.
    pub fn bound(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 2.0 * self.a;
        }
        let ax = x.abs();
        let base = 1.0 / (PI * ax);
        let decay = base * (f64::from(self.r) / (2.0 * PI * ax * self.delta)).powi(self.r as i32);
        (2.0 * self.a).min(base).min(decay)
    }
}

/// Fourier transform `Θ(x) = ∫ e(-xy) φ(y) dy`.
pub fn theta(k: &SmoothingKernel, x: f64) -> f64 {
    if x == 0.0 {
        return 2.0 * k.a;
    }
    let w = 2.0 * PI * x * k.delta / f64::from(k.r);
    (2.0 * PI * k.a * x).sin() / (PI * x) * sinc(w).powi(k.r as i32)
}

fn sinc(w: f64) -> f64 {
    if w.abs() < 1e-4 {
        let w2 = w * w;
        1.0 - w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sin() / w
    }
}

/// `φ = 1_[-a,a] * ψ^{*r}` with `ψ` uniform on `[-Δ/r, Δ/r]`.
pub fn phi(k: &SmoothingKernel, y: f64) -> f64 {
    // a > Δ makes the upper tail vanish: φ(y) = P(S <= a - |y|)
    let h = k.delta / f64::from(k.r);
    let t = ((k.a - y.abs()) / h + f64::from(k.r)) / 2.0;
    irwin_hall_cdf(k.r, t).clamp(0.0, 1.0)
}

/// CDF of the sum of `r` independent `U(0, 1)` variables.
pub fn irwin_hall_cdf(r: u32, t: f64) -> f64 {
    let rf = f64::from(r);
    if t <= 0.0 {
        return 0.0;
    }
    if t >= rf {
        return 1.0;
    }
    if t > rf / 2.0 {
        return 1.0 - irwin_hall_cdf(r, rf - t);
    }
    // Σ_j N_{r+1}(t - j), cardinal B-splines by the stable recurrence
    bspline_shifts(r as usize + 1, t).iter().sum()
}

/// Irwin–Hall density, `N_r(t)`.
pub fn irwin_hall_pdf(r: u32, t: f64) -> f64 {
    if t <= 0.0 || t >= f64::from(r) {
        return 0.0;
    }
    bspline_shifts(r as usize, t)[0]
}

/// `[N_m(t - j) for j in 0..m]`.
fn bspline_shifts(m: usize, t: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=m).map(|j| f64::from(u8::from((0.0..1.0).contains(&(t - j as f64))))).collect();
    for k in 2..=m {
        let kf = k as f64;
        for j in 0..m {
            let s = t - j as f64;
            v[j] = (s * v[j] + (kf - s) * v[j + 1]) / (kf - 1.0);
        }
    }
    v.truncate(m);
    v
}

/// `Θ(x)` by Gauss–Legendre quadrature of `2 ∫_0^{a+Δ} cos(2πxy) φ(y) dy`,
/// split at the spline knots.
pub fn theta_quadrature(k: &SmoothingKernel, x: f64) -> f64 {
    let gl = GaussLegendre::<f64>::new(20);
    let h = k.delta / f64::from(k.r);
    let mut knots = vec![0.0];
    knots.extend((0..=k.r).map(|j| k.a - k.delta + 2.0 * h * f64::from(j)));
    let mut total = 0.0;
    for w in knots.windows(2) {
        let panels = ((w[1] - w[0]) * x.abs() * 8.0).ceil().max(4.0) as usize;
        total += gl.composite(|y| (2.0 * PI * x * y).cos() * phi(k, y), w[0], w[1], panels);
    }
    2.0 * total
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelAudit {
    pub kernel: SmoothingKernel,
    pub bound_points: usize,
    pub bound_violations: usize,
    pub shape_points: usize,
    pub shape_violations: usize,
    pub quadrature_points: usize,
    pub max_quadrature_gap: f64,
}

impl KernelAudit {
    pub fn passed(&self) -> bool {
        self.bound_violations == 0 && self.shape_violations == 0 && self.max_quadrature_gap <= 1e-8
    }
}

/// Decay bound at 10³ log-spaced `±x` in `[10⁻³, 10³]`, plateau and support of
/// `φ` on a dyadic grid, and `Θ` against quadrature at 20 points.
pub fn kernel_audit(k: &SmoothingKernel) -> KernelAudit {
    let xs: Vec<f64> = (0..1000).map(|i| 1e-3 * 10f64.powf(6.0 * f64::from(i) / 999.0)).collect();
    let bound_violations = xs
        .iter()
        .flat_map(|&x| [x, -x])
        .filter(|&x| theta(k, x).abs() > k.bound(x) * (1.0 + 4.0 * f64::EPSILON))
        .count();
    let half = (1.5 * (k.a + k.delta) * 4096.0).ceil() as i64;
    let mut shape_violations = 0;
    for i in -half..=half {
        let y = i as f64 / 4096.0;
        let v = phi(k, y);
        let ok = if y.abs() <= k.a - k.delta {
            v == 1.0
        } else if y.abs() >= k.a + k.delta {
            v == 0.0
        } else {
            0.0 < v && v < 1.0
        };
        shape_violations += usize::from(!ok);
    }
    let max_quadrature_gap = (0..20)
        .map(|i| {
            let x = 0.01 * 10f64.powf(4.0 * f64::from(i) / 19.0);
            (theta(k, x) - theta_quadrature(k, x)).abs()
        })
        .fold(0.0, f64::max);
    KernelAudit {
        kernel: *k,
        bound_points: 2 * xs.len(),
        bound_violations,
        shape_points: (2 * half + 1) as usize,
        shape_violations,
        quadrature_points: 20,
        max_quadrature_gap,
    }
}

/// Sieve weights `λ(d)` for `d <= level`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Weights {
    pub level: u64,
    pub lambda: BTreeMap<u64, f64>,
}

impl Weights {
    /// `λ(1) = 1` and nothing else.
    pub fn unit() -> Self {
        Weights { level: 1, lambda: BTreeMap::from([(1, 1.0)]) }
    }

    /// `λ(d) = μ(d)` on odd `d <= level`.
    pub fn mobius(level: u64) -> Self {
        let lambda = (1..=level)
            .step_by(2)
            .filter_map(|d| {
                let m = moebius(d);
                (m != 0).then_some((d, f64::from(m)))
            })
            .collect();
        Weights { level, lambda }
    }

    pub fn rosser(w: &RosserWeights, side: Side) -> Self {
        let lambda = w
            .entries
            .keys()
            .filter_map(|&d| {
                let v = w.weight(d, side);
                (v != 0).then_some((d, f64::from(v)))
            })
            .collect();
        Weights { level: w.level, lambda }
    }

    /// Arbitrary weights, checked against `|λ| <= 1` and the odd squarefree support.
    pub fn free(level: u64, lambda: BTreeMap<u64, f64>) -> Result<Self, EvalError> {
        for (&d, &v) in &lambda {
            if d == 0 || d > level {
                return Err(EvalError::Weights(format!("d = {d} outside 1..={level}")));
            }
            if !(v.abs() <= 1.0) {
                return Err(EvalError::Weights(format!("|λ({d})| = {} > 1", v.abs())));
            }
            if v != 0.0 && (d % 2 == 0 || moebius(d) == 0) {
                return Err(EvalError::Weights(format!("λ({d}) must vanish: d is even or not squarefree")));
            }
        }
        Ok(Weights { level, lambda })
    }

    /// `Σ λ(d)/φ(d)`.
    pub fn mass(&self) -> f64 {
        self.lambda.iter().map(|(&d, &v)| v / euler_phi(d) as f64).sum()
    }
}

pub fn moebius(n: u64) -> i8 {
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out = out / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        out = out / m * (m - 1);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub u: f64,
    pub w: f64,
}

fn eval_terms(terms: &[Term], x: f64) -> Complex64 {
    terms.iter().map(|t| e_prod(t.u, x) * t.w).sum()
}

pub const DEFAULT_OSCILLATION_BUDGET: f64 = 1e8;

/// Inputs of `L`, `T` and `I` at one scale.
#[derive(Debug, Clone, Serialize)]
pub struct SumContext {
    pub c: f64,
    #[serde(rename = "X")]
    pub x_big: f64,
    pub mu: f64,
    pub weights: Weights,
    /// Prime terms `(p^c, log p Σ_{d | p+2} λ(d))`.
    #[serde(skip)]
    pub l_terms: Vec<Term>,
    /// Integer terms `(n^c, #{d <= level : d | n+2})`.
    #[serde(skip)]
    pub t_terms: Vec<Term>,
    pub oscillation_budget: f64,
}

impl SumContext {
    pub fn new(table: &PrimeTable, c: f64, x_big: f64, mu: f64, weights: Weights) -> Result<Self, EvalError> {
        if !(c >= 1.0 && x_big >= 2.0 && mu > 0.0 && mu < 1.0) {
            return Err(EvalError::Context(format!("need c >= 1, X >= 2, 0 < mu < 1; got c = {c}, X = {x_big}, mu = {mu}")));
        }
        if x_big > table.limit() as f64 {
            return Err(EvalError::Range { x: x_big, limit: table.limit() });
        }
        let a = (mu * x_big).floor() as u64;
        let b = x_big.floor() as u64;
        let len = (b - a) as usize;

        let mut acc = vec![0.0f64; len];
        for (&d, &v) in &weights.lambda {
            stride_add(&mut acc, a, d, |slot| *slot += v);
        }
        let l_terms = table
            .primes_in(a, b)?
            .into_iter()
            .filter_map(|p| {
                let w = acc[(p - a - 1) as usize];
                (w != 0.0).then(|| Term { u: (p as f64).powf(c), w: w * (p as f64).ln() })
            })
            .collect();

        let mut count = vec![0u32; len];
        for d in 1..=weights.level {
            stride_add(&mut count, a, d, |slot| *slot += 1);
        }
        let t_terms = (0..len)
            .filter(|&i| count[i] != 0)
            .map(|i| Term { u: ((a + 1 + i as u64) as f64).powf(c), w: f64::from(count[i]) })
            .collect();

        Ok(SumContext { c, x_big, mu, weights, l_terms, t_terms, oscillation_budget: DEFAULT_OSCILLATION_BUDGET })
    }

    /// `Σ λ(d)/φ(d)`, the coefficient of `I` in the major-arc approximation.
    pub fn mass(&self) -> f64 {
        self.weights.mass()
    }

    /// `Σ |coefficients|` of `L`, the triangle-inequality bound.
    pub fn trivial_bound(&self) -> f64 {
        self.l_terms.iter().map(|t| t.w.abs()).sum()
    }

    pub fn lower(&self) -> f64 {
        self.mu * self.x_big
    }
}

/// Add to `acc[n - a - 1]` for every `n in (a, a + len]` with `d | n + 2`.
fn stride_add<T>(acc: &mut [T], a: u64, d: u64, mut f: impl FnMut(&mut T)) {
    let first = a + 1;
    let offset = (d - (first + 2) % d) % d;
    let mut i = offset as usize;
    while i < acc.len() {
        f(&mut acc[i]);
        i += d as usize;
    }
}

pub fn eval_l(ctx: &SumContext, x: f64) -> Complex64 {
    eval_terms(&ctx.l_terms, x)
}

pub fn eval_t(ctx: &SumContext, x: f64) -> Complex64 {
    eval_terms(&ctx.t_terms, x)
}

/// `L⁺(x)` or `L⁻(x)` for Rosser weights; the context's own weights are ignored.
pub fn eval_lpm(
    table: &PrimeTable,
    ctx: &SumContext,
    w: &RosserWeights,
    side: Side,
    x: f64,
) -> Result<Complex64, EvalError> {
    let signed = SumContext::new(table, ctx.c, ctx.x_big, ctx.mu, Weights::rosser(w, side))?;
    Ok(eval_l(&signed, x))
}

/// `I(x) = ∫_{μX}^{X} e(t^c x) dt`.
pub fn eval_i(ctx: &SumContext, x: f64) -> Result<Complex64, EvalError> {
    let (lo, hi) = (ctx.lower(), ctx.x_big);
    if x == 0.0 {
        return Ok(Complex64::new(hi - lo, 0.0));
    }
    let c = ctx.c;
    let (u0, u1) = (lo.powf(c), hi.powf(c));
    let periods = x.abs() * (u1 - u0);
    let panels = (8.0 * (1.0 + periods)).ceil().max(16.0);
    if panels > ctx.oscillation_budget {
        return Err(EvalError::Oscillation { needed: panels, budget: ctx.oscillation_budget });
    }
    let panels = panels as usize;
    let gl = GaussLegendre::<f64>::new(16);
    let h = (u1 - u0) / panels as f64;
    let expo = 1.0 / c - 1.0;
    let sum: Complex64 = (0..panels)
        .map(|k| {
            let a = u0 + h * k as f64;
            let mid = a + h / 2.0;
            gl.nodes
                .iter()
                .zip(&gl.weights)
                .map(|(&n, &w)| {
                    let u = mid + h / 2.0 * n;
                    e_prod(u, x) * (w * u.powf(expo))
                })
                .sum::<Complex64>()
                * (h / 2.0)
        })
        .sum();
    Ok(sum / c)
}

/// Closed form of `I(x)` at `c = 1`.
pub fn eval_i_c1(lo: f64, hi: f64, x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(hi - lo, 0.0);
    }
    (e_prod(hi, x) - e_prod(lo, x)) / Complex64::new(0.0, 2.0 * PI * x)
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MajorArcReport {
    #[serde(rename = "X")]
    pub x_big: f64,
    pub mass: f64,
    pub points: Vec<(f64, f64)>,
    pub max_rho: f64,
    pub median_rho: f64,
}

/// `ρ(x) = |L(x) - mass·I(x)| / X` over the grid.
pub fn major_arc_check(ctx: &SumContext, grid: &[f64]) -> Result<MajorArcReport, EvalError> {
    let mass = ctx.mass();
    let points = grid
        .par_iter()
        .map(|&x| Ok((x, (eval_l(ctx, x) - eval_i(ctx, x)? * mass).norm() / ctx.x_big)))
        .collect::<Result<Vec<_>, EvalError>>()?;
    let mut rhos: Vec<f64> = points.iter().map(|p| p.1).collect();
    let max_rho = rhos.iter().copied().fold(0.0, f64::max);
    let median_rho = median(&mut rhos);
    Ok(MajorArcReport { x_big: ctx.x_big, mass, points, max_rho, median_rho })
}

/// `n` equally spaced points on `[-tau, tau]`.
pub fn major_grid(tau: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0];
    }
    (0..n).map(|i| -tau + 2.0 * tau * i as f64 / (n - 1) as f64).collect()
}

/// `n` geometric points on `[lo, hi]` followed by their negatives.
pub fn minor_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let ratio = (hi / lo).ln();
    let pos: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => lo * (ratio * i as f64 / (n - 1) as f64).exp(),
        })
        .collect();
    pos.iter().copied().chain(pos.iter().map(|x| -x)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SupReport {
    #[serde(rename = "X")]
    pub x_big: f64,
    pub max_abs: f64,
    pub argmax: f64,
    /// `max_abs / X^{4/3 - c/3}`.
    pub ratio: f64,
    pub trivial_bound: f64,
    pub within_trivial: bool,
    pub grid_points: usize,
}

pub fn sup_scan(ctx: &SumContext, tau: f64, k: f64, grid_size: usize) -> Result<SupReport, EvalError> {
    if grid_size < 2 || !(0.0 < tau && tau < k) {
        return Err(EvalError::Context(format!("need grid_size >= 2 and 0 < tau < K, got {grid_size}, {tau}, {k}")));
    }
    let grid = minor_grid(tau, k, grid_size);
    let values: Vec<f64> = grid.par_iter().map(|&x| eval_l(ctx, x).norm()).collect();
    let (mut max_abs, mut argmax) = (0.0, grid[0]);
    for (&x, &v) in grid.iter().zip(&values) {
        if v > max_abs {
            max_abs = v;
            argmax = x;
        }
    }
    let trivial_bound = ctx.trivial_bound();
    let slack = 1.0 + 1e-12;
    Ok(SupReport {
        x_big: ctx.x_big,
        max_abs,
        argmax,
        ratio: max_abs / ctx.x_big.powf(4.0 / 3.0 - ctx.c / 3.0),
        trivial_bound,
        within_trivial: values.iter().all(|&v| v <= trivial_bound * slack),
        grid_points: grid.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeanTarget {
    L,
    I,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeanValueReport {
    #[serde(rename = "X")]
    pub x_big: f64,
    pub k: u32,
    pub target: MeanTarget,
    /// `∫_{lo <= |x| <= hi} |F(x)|^k dx`.
    pub integral: f64,
    /// `integral / X^{k - c}`.
    pub ratio: f64,
    /// `log X`, reported so log powers can be divided out.
    pub log_x: f64,
    pub panels: usize,
}

/// Composite 8-point Gauss–Legendre over `lo <= |x| <= hi`, both signs.
pub fn mean_value_check(
    ctx: &SumContext,
    k: u32,
    target: MeanTarget,
    lo: f64,
    hi: f64,
) -> Result<MeanValueReport, EvalError> {
    if !(2..=4).contains(&k) || !(0.0 <= lo && lo < hi) {
        return Err(EvalError::Context(format!("need k in 2..=4 and 0 <= lo < hi, got k = {k}, [{lo}, {hi}]")));
    }
    let freq = ctx.x_big.powf(ctx.c) * f64::from(k);
    let needed = (4.0 * (hi - lo) * freq).ceil().max(8.0);
    if needed > ctx.oscillation_budget {
        return Err(EvalError::Oscillation { needed, budget: ctx.oscillation_budget });
    }
    let panels = needed as usize;
    let gl = GaussLegendre::<f64>::new(8);
    let h = (hi - lo) / panels as f64;
    let f = |x: f64| -> Result<f64, EvalError> {
        let v = match target {
            MeanTarget::L => eval_l(ctx, x),
            MeanTarget::I => eval_i(ctx, x)?,
        };
        Ok(v.norm().powi(k as i32))
    };
    let parts = (0..panels)
        .into_par_iter()
        .map(|p| {
            let mid = lo + h * (p as f64 + 0.5);
            let mut s = 0.0;
            for (&n, &w) in gl.nodes.iter().zip(&gl.weights) {
                // |F(-x)| = |F(x)| by conjugate symmetry
                s += w * f(mid + h / 2.0 * n)?;
            }
            Ok(s * h / 2.0)
        })
        .collect::<Result<Vec<f64>, EvalError>>()?;
    let integral = 2.0 * pairwise_sum(&parts);
    Ok(MeanValueReport {
        x_big: ctx.x_big,
        k,
        target,
        integral,
        ratio: integral / ctx.x_big.powf(f64::from(k) - ctx.c),
        log_x: ctx.x_big.ln(),
        panels,
    })
}

pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub x: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ArcRange {
    Major,
    Minor,
}

/// `L` on the major grid `[-τ, τ]` (bound column `|mass·I(x)|`) or on the
/// minor grid `τ <= |x| <= K` (bound column `X^{4/3 - c/3}`).
pub fn scan_rows(ctx: &SumContext, range: ArcRange, tau: f64, k: f64, grid: usize) -> Result<Vec<ScanRow>, EvalError> {
    let xs = match range {
        ArcRange::Major => major_grid(tau, grid),
        ArcRange::Minor => minor_grid(tau, k, grid),
    };
    let minor_bound = ctx.x_big.powf(4.0 / 3.0 - ctx.c / 3.0);
    let mass = ctx.mass();
    xs.par_iter()
        .map(|&x| {
            let v = eval_l(ctx, x);
            let bound = match range {
                ArcRange::Major => (eval_i(ctx, x)? * mass).norm(),
                ArcRange::Minor => minor_bound,
            };
            Ok(ScanRow { x, re: v.re, im: v.im, abs: v.norm(), bound })
        })
        .collect()
}
