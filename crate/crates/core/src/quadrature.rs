//! Adaptive Simpson and Gauss–Legendre rules, generic over [`Real`].

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("adaptive quadrature exceeded {0} subdivisions")]
    TooManySubdivisions(usize),
    #[error("tolerance must be positive")]
    BadTolerance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub tolerance: T,
    pub max_subdivisions: usize,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        let floor = T::epsilon() * T::lit(64.0);
        QuadratureConfig { tolerance: T::lit(1e-12).max(floor), max_subdivisions: 1 << 20 }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn with_tolerance(tolerance: T) -> Self {
        QuadratureConfig { tolerance, ..Default::default() }
    }
}

/// Adaptive Simpson with Richardson correction. Absolute tolerance.
pub fn adaptive_simpson<T, F>(f: F, a: T, b: T, cfg: &QuadratureConfig<T>) -> Result<T, QuadError>
where
    T: Real,
    F: Fn(T) -> T,
{
    if !(cfg.tolerance > T::zero()) {
        return Err(QuadError::BadTolerance);
    }
    if a == b {
        return Ok(T::zero());
    }
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    let fifteen = T::lit(15.0);
    let simpson = |a: T, fa: T, fm: T, b: T, fb: T| (b - a) / six * (fa + T::lit(4.0) * fm + fb);

    let fa = f(a);
    let fb = f(b);
    let m = (a + b) / two;
    let fm = f(m);
    let whole = simpson(a, fa, fm, b, fb);

    // explicit stack keeps deep refinement off the call stack
    let mut stack = vec![(a, fa, m, fm, b, fb, whole, cfg.tolerance)];
    let mut total = T::zero();
    let mut splits = 0usize;
    while let Some((a, fa, m, fm, b, fb, whole, tol)) = stack.pop() {
        let lm = (a + m) / two;
        let rm = (m + b) / two;
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, flm, m, fm);
        let right = simpson(m, fm, frm, b, fb);
        let diff = left + right - whole;
        if diff.abs() <= fifteen * tol || (b - a).abs() <= T::epsilon() * (a.abs() + b.abs()) {
            total = total + left + right + diff / fifteen;
            continue;
        }
        splits += 1;
        if splits > cfg.max_subdivisions {
            return Err(QuadError::TooManySubdivisions(cfg.max_subdivisions));
        }
        let half = tol / two;
        stack.push((m, fm, rm, frm, b, fb, right, half));
        stack.push((a, fa, lm, flm, m, fm, left, half));
    }
    Ok(total)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Newton iteration on `P_n` from the Chebyshev initial guesses, in `f64`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn integrate<F: Fn(T) -> T>(&self, f: F, a: T, b: T) -> T {
        let two = T::lit(2.0);
        let half = (b - a) / two;
        let mid = (a + b) / two;
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(mid + half * x))
            * half
    }

    /// Composite rule over `panels` equal panels.
    pub fn composite<F: Fn(T) -> T>(&self, f: F, a: T, b: T, panels: usize) -> T {
        let h = (b - a) / T::from_usize(panels).expect("panel count");
        (0..panels).fold(T::zero(), |acc, k| {
            let lo = a + h * T::from_usize(k).expect("panel index");
            acc + self.integrate(&f, lo, lo + h)
        })
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
