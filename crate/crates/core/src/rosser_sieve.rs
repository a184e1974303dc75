//! Rosser–Iwaniec weights of level `D` for the odd primes below `z`.
//!
//! For `d = p_1 p_2 ... p_r` with `z > p_1 > ... > p_r > 2`:
//!
//! * `λ⁺(d) = μ(d)` iff `p_1 ... p_{m-1} p_m^3 < D` for every odd `m <= r`;
//! * `λ⁻(d) = μ(d)` iff the same holds for every even `m <= r`;
//!
//! and both vanish otherwise. The divisor-sum sandwich
//! `Σ λ⁻ <= [(n, P(z)) = 1] <= Σ λ⁺` is what certifies the construction;
//! [`sandwich_audit`] checks it by brute force.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::param_audit::ser_rat;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RosserError {
    #[error("level D = {0} must exceed 4")]
    LevelTooSmall(u64),
    #[error("sieve limit z = {0} must be at least 3")]
    LimitTooSmall(u64),
    #[error(
        "degenerate level: prime {prime} < z = {z} is not below D = {level}, \
         so the lower weights cannot be supported below D"
    )]
    Degenerate { level: u64, z: u64, prime: u64 },
    #[error("weight table exceeded the entry budget of {0}")]
    Budget(usize),
    #[error("sieve sums out of order: M- <= P <= M+ fails (construction bug)")]
    SumsOutOfOrder,
}

/// Odd primes `p` with `2 < p < z`, ascending.
pub fn odd_primes_below(z: u64) -> Vec<u64> {
    let n = z.saturating_sub(1) as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 3..=n {
        if !composite[i] {
            if i % 2 == 1 {
                out.push(i as u64);
            }
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        if i % 2 == 0 {
            composite[i] = true;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightEntry {
    pub plus: i8,
    pub minus: i8,
    /// Euler's `φ(d)`.
    pub phi: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RosserWeights {
    pub level: u64,
    pub z: u64,
    /// Odd primes below `z`, ascending.
    pub primes: Vec<u64>,
    /// `d` with at least one nonzero weight. `d = 1` is always present.
    pub entries: BTreeMap<u64, WeightEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Hash)]
pub enum Side {
    Plus,
    Minus,
}

pub const DEFAULT_ENTRY_BUDGET: usize = 20_000_000;

pub fn build_weights(level: u64, z: u64) -> Result<RosserWeights, RosserError> {
    build_weights_with_budget(level, z, DEFAULT_ENTRY_BUDGET)
}

pub fn build_weights_with_budget(level: u64, z: u64, budget: usize) -> Result<RosserWeights, RosserError> {
    if level <= 4 {
        return Err(RosserError::LevelTooSmall(level));
    }
    if z < 3 {
        return Err(RosserError::LimitTooSmall(z));
    }
    let primes = odd_primes_below(z);
    if let Some(&p) = primes.last() {
        if p >= level {
            return Err(RosserError::Degenerate { level, z, prime: p });
        }
    }
    let mut entries = BTreeMap::new();
    entries.insert(1, WeightEntry { plus: 1, minus: 1, phi: 1 });

    // depth-first over strictly decreasing prime sequences
    struct Frame {
        product: u64,
        phi: u64,
        /// next prime must have index < `below`
        below: usize,
        depth: usize,
        plus_ok: bool,
        minus_ok: bool,
    }
    let mut stack = vec![Frame { product: 1, phi: 1, below: primes.len(), depth: 0, plus_ok: true, minus_ok: true }];
    while let Some(f) = stack.pop() {
        for i in (0..f.below).rev() {
            let p = primes[i];
            let Some(d) = f.product.checked_mul(p).filter(|&d| d < level) else {
                continue;
            };
            let m = f.depth + 1;
            let cube_ok = f.product.checked_mul(p * p * p).is_some_and(|v| v < level);
            let plus_ok = f.plus_ok && (m % 2 == 0 || cube_ok);
            let minus_ok = f.minus_ok && (m % 2 == 1 || cube_ok);
            if !plus_ok && !minus_ok {
                continue;
            }
            let sign: i8 = if m % 2 == 1 { -1 } else { 1 };
            let phi = f.phi * (p - 1);
            entries.insert(
                d,
                WeightEntry { plus: if plus_ok { sign } else { 0 }, minus: if minus_ok { sign } else { 0 }, phi },
            );
            if entries.len() > budget {
                return Err(RosserError::Budget(budget));
            }
            stack.push(Frame { product: d, phi, below: i, depth: m, plus_ok, minus_ok });
        }
    }
    Ok(RosserWeights { level, z, primes, entries })
}

impl RosserWeights {
    pub fn weight(&self, d: u64, side: Side) -> i8 {
        self.entries.get(&d).map_or(0, |e| match side {
            Side::Plus => e.plus,
            Side::Minus => e.minus,
        })
    }

    /// Distinct odd primes `< z` dividing `n`.
    pub fn sifting_primes_of(&self, n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut m = n;
        while m % 2 == 0 && m > 0 {
            m /= 2;
        }
        for &p in &self.primes {
            if p * p > m {
                break;
            }
            if m % p == 0 {
                out.push(p);
                while m % p == 0 {
                    m /= p;
                }
            }
        }
        if m > 2 && m < self.z {
            out.push(m);
        }
        out
    }

    /// `(Σ λ⁻(d), Σ μ(d), Σ λ⁺(d))` over squarefree `d` built from `primes`.
    pub fn divisor_sums(&self, primes: &[u64]) -> (i64, u8, i64) {
        let k = primes.len();
        let (mut lo, mut hi) = (0i64, 0i64);
        for mask in 0u32..(1u32 << k) {
            let mut d = 1u64;
            let mut small = true;
            for (j, &p) in primes.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    d = d.saturating_mul(p);
                    if d >= self.level {
                        small = false;
                        break;
                    }
                }
            }
            if small {
                if let Some(e) = self.entries.get(&d) {
                    lo += i64::from(e.minus);
                    hi += i64::from(e.plus);
                }
            }
        }
        (lo, u8::from(k == 0), hi)
    }
}

/// `(lower, [(n, P(z)) = 1], upper)` for one `n`.
pub fn sandwich_check(n: u64, w: &RosserWeights) -> (i64, u8, i64) {
    w.divisor_sums(&w.sifting_primes_of(n))
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveSums {
    #[serde(rename = "P", serialize_with = "ser_rat")]
    pub p_frak: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub m_plus: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub m_minus: Rational,
    /// `log D / log z`.
    pub s0: f64,
}

/// Exact `P = ∏ (1 - 1/(p-1))` and `M± = Σ λ±(d)/φ(d)`.
pub fn compute_sums(w: &RosserWeights) -> Result<SieveSums, RosserError> {
    let mut p_frak = Rational::one();
    for &p in &w.primes {
        p_frak *= Rational::new(BigInt::from(p - 2), BigInt::from(p - 1));
    }
    // accumulate per denominator first to keep big-rational work small
    let mut by_phi: BTreeMap<u64, (i64, i64)> = BTreeMap::new();
    for e in w.entries.values() {
        let slot = by_phi.entry(e.phi).or_default();
        slot.0 += i64::from(e.plus);
        slot.1 += i64::from(e.minus);
    }
    let (mut m_plus, mut m_minus) = (Rational::zero(), Rational::zero());
    for (phi, (plus, minus)) in by_phi {
        let den = BigInt::from(phi);
        m_plus += Rational::new(BigInt::from(plus), den.clone());
        m_minus += Rational::new(BigInt::from(minus), den);
    }
    if !(m_minus <= p_frak && p_frak <= m_plus) {
        return Err(RosserError::SumsOutOfOrder);
    }
    Ok(SieveSums { p_frak, m_plus, m_minus, s0: (w.level as f64).ln() / (w.z as f64).ln() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwitchVerdict {
    pub binary: bool,
    pub quaternary: bool,
}

/// Two- and four-variable switching inequalities for one tuple.
pub fn switch_check(n: [u64; 4], w: &RosserWeights) -> SwitchVerdict {
    let t: Vec<(i64, i64, i64)> = n
        .iter()
        .map(|&ni| {
            let (lo, mid, hi) = sandwich_check(ni, w);
            (lo, i64::from(mid), hi)
        })
        .collect();
    let (l1, m1, u1) = t[0];
    let (l2, m2, u2) = t[1];
    let binary = m1 * m2 >= l1 * u2 + u1 * l2 - u1 * u2;

    let all_plus: i64 = t.iter().map(|x| x.2).product();
    let lhs: i64 = t.iter().map(|x| x.1).product();
    let mut rhs = -3 * all_plus;
    for i in 0..4 {
        rhs += (0..4).map(|j| if i == j { t[j].0 } else { t[j].2 }).product::<i64>();
    }
    SwitchVerdict { binary, quaternary: lhs >= rhs }
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichAudit {
    pub level: u64,
    pub z: u64,
    pub nmax: u64,
    pub entries: usize,
    pub checked: u64,
    pub lower_violations: u64,
    pub upper_violations: u64,
    /// Smallest violating `n`, if any.
    pub first_violation: Option<u64>,
    pub sums: SieveSums,
}

impl SandwichAudit {
    pub fn passed(&self) -> bool {
        self.lower_violations == 0 && self.upper_violations == 0
    }
}

/// Check the sandwich for every `1 <= n <= nmax`, in parallel.
pub fn sandwich_audit(w: &RosserWeights, nmax: u64) -> Result<SandwichAudit, RosserError> {
    let (lower_violations, upper_violations, first) = (1..=nmax)
        .into_par_iter()
        .map(|n| {
            let (lo, mid, hi) = sandwich_check(n, w);
            let bad_lo = lo > i64::from(mid);
            let bad_hi = i64::from(mid) > hi;
            (u64::from(bad_lo), u64::from(bad_hi), (bad_lo || bad_hi).then_some(n))
        })
        .reduce(
            || (0, 0, None),
            |a, b| {
                let first = match (a.2, b.2) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                (a.0 + b.0, a.1 + b.1, first)
            },
        );
    Ok(SandwichAudit {
        level: w.level,
        z: w.z,
        nmax,
        entries: w.entries.len(),
        checked: nmax,
        lower_violations,
        upper_violations,
        first_violation: first,
        sums: compute_sums(w)?,
    })
}
