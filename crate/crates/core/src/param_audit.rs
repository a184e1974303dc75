//! Derived parameters and exact exponent audits over the admissible `c` range.
//!
//! Every exponent inequality here is linear in `c` once `delta` and `xi`
//! are substituted, so checking both interval endpoints certifies the
//! whole interval.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{fmt_rational, Field};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("c = {c} violates {bound}: need 1 < c < 1787/1502")]
    COutOfRange { c: String, bound: &'static str },
    #[error("N = {0} is below the minimum 100")]
    NTooSmall(f64),
    #[error("mu = {0} must lie strictly between 0 and 1")]
    MuOutOfRange(String),
}

/// Upper end of the admissible interval for `c`.
pub fn c_max() -> Rational {
    Rational::from_ratio(1787, 1502)
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn check_open(c: &Rational) -> Result<(), ParamError> {
    if *c <= r(1, 1) {
        return Err(ParamError::COutOfRange { c: fmt_rational(c), bound: "c > 1" });
    }
    if *c >= c_max() {
        return Err(ParamError::COutOfRange { c: fmt_rational(c), bound: "c < 1787/1502" });
    }
    Ok(())
}

fn check_closed(c: &Rational) -> Result<(), ParamError> {
    if *c < r(1, 1) {
        return Err(ParamError::COutOfRange { c: fmt_rational(c), bound: "c >= 1" });
    }
    if *c > c_max() {
        return Err(ParamError::COutOfRange { c: fmt_rational(c), bound: "c <= 1787/1502" });
    }
    Ok(())
}

pub fn delta_of(c: &Rational) -> Rational {
    c_max() - c
}

pub fn xi_of(c: &Rational) -> Rational {
    r(2, 3) * c - r(1, 3)
}

pub fn eta1_of(c: &Rational) -> Rational {
    r(20, 53) * delta_of(c)
}

pub fn eta2_of(c: &Rational) -> Rational {
    r(20000, 62451) * delta_of(c)
}

#[derive(Debug, Clone, Serialize)]
pub struct Params {
    #[serde(serialize_with = "ser_rat")]
    pub c: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub xi: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub eta1: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub eta2: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub mu: Rational,
    pub e: f64,
    pub n: f64,
    pub x: f64,
    pub d: f64,
    pub tau: f64,
    pub z1: f64,
    pub z2: f64,
    pub k: f64,
    pub delta_window: f64,
    pub warnings: Vec<String>,
}

pub(crate) fn ser_rat<S: serde::Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(v))
}

impl Params {
    pub fn c_f64(&self) -> f64 {
        Field::to_f64(&self.c)
    }

    pub fn mu_f64(&self) -> f64 {
        Field::to_f64(&self.mu)
    }
}

/// Default `mu` when none is given.
pub fn default_mu() -> Rational {
    r(1, 2)
}

pub fn derive_params(c: &Rational, n: f64, e: f64, mu: &Rational) -> Result<Params, ParamError> {
    check_open(c)?;
    if !(n >= 100.0) {
        return Err(ParamError::NTooSmall(n));
    }
    if !(mu.is_positive() && *mu < r(1, 1)) {
        return Err(ParamError::MuOutOfRange(fmt_rational(mu)));
    }
    let delta = delta_of(c);
    let xi = xi_of(c);
    let eta1 = eta1_of(c);
    let eta2 = eta2_of(c);
    let cf = Field::to_f64(c);
    let x = n.powf(1.0 / cf);
    let log_x = x.ln();
    let pow = |q: &Rational| x.powf(Field::to_f64(q));
    let d = pow(&delta);
    let tau = x.powf(Field::to_f64(&xi) - cf);
    let z1 = pow(&eta1);
    let z2 = pow(&eta2);
    let k = log_x.powf(e + 3.0);
    let delta_window = n.ln().powf(-e);

    let mut warnings = Vec::new();
    if z1 <= 2.0 {
        warnings.push(format!("z1 = {z1:.6} <= 2: sieve condition is vacuous at this N"));
    }
    if z2 <= 2.0 {
        warnings.push(format!("z2 = {z2:.6} <= 2: sieve condition is vacuous at this N"));
    }
    if !(tau < 1.0 && 1.0 < k) {
        warnings.push(format!("expected tau < 1 < K, got tau = {tau:e}, K = {k:e}"));
    }
    Ok(Params {
        c: c.clone(),
        delta,
        xi,
        eta1,
        eta2,
        mu: mu.clone(),
        e,
        n,
        x,
        d,
        tau,
        z1,
        z2,
        k,
        delta_window,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    Binary,
    Quaternary,
}

impl Theorem {
    pub fn from_index(i: u32) -> Option<Theorem> {
        match i {
            1 => Some(Theorem::Binary),
            2 => Some(Theorem::Quaternary),
            _ => None,
        }
    }
}

/// `floor(1 / eta_j)`: the almost-prime order allowed for `p + 2`.
///
/// Also checks the closed forms `79606 / (35740 - 30040c)` and
/// `93801402 / (35740000 - 30040000c)` exactly.
pub fn almost_prime_order(c: &Rational, theorem: Theorem) -> Result<u64, ParamError> {
    check_open(c)?;
    let (inv, closed) = match theorem {
        Theorem::Binary => (
            eta1_of(c).recip(),
            r(79606, 1) / (r(35740, 1) - r(30040, 1) * c),
        ),
        Theorem::Quaternary => (
            eta2_of(c).recip(),
            r(93801402, 1) / (r(35740000, 1) - r(30040000, 1) * c),
        ),
    };
    assert_eq!(inv, closed, "closed form for 1/eta disagrees at c = {}", fmt_rational(c));
    Ok(inv.floor().to_integer().to_u64().expect("positive order"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Pass,
    /// Margin exactly zero on a line whose right side carries an `X^{-eps}` slack.
    BoundaryPass,
    Fail,
}

impl Verdict {
    pub fn ok(self) -> bool {
        self != Verdict::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditLine {
    pub name: String,
    #[serde(serialize_with = "ser_rat")]
    pub c: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub rhs: Rational,
    pub verdict: Verdict,
    #[serde(serialize_with = "ser_rat")]
    pub margin: Rational,
}

impl AuditLine {
    /// Strict `lhs < rhs`; zero margin downgrades to `BoundaryPass` when `eps_absorbed`.
    fn strict(name: impl Into<String>, c: &Rational, lhs: Rational, rhs: Rational, eps_absorbed: bool) -> Self {
        let margin = rhs.clone() - lhs.clone();
        let verdict = if margin.is_positive() {
            Verdict::Pass
        } else if margin.is_zero() && eps_absorbed {
            Verdict::BoundaryPass
        } else {
            Verdict::Fail
        };
        AuditLine { name: name.into(), c: c.clone(), lhs, rhs, verdict, margin }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AuditReport {
    pub lines: Vec<AuditLine>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.verdict.ok())
    }

    pub fn extend(&mut self, other: AuditReport) {
        self.lines.extend(other.lines);
    }
}

/// Conditions `2 xi + 16 delta < 5` and `7 xi + 14 delta < 5`.
pub fn audit_major_arc(c: &Rational) -> Result<AuditReport, ParamError> {
    check_closed(c)?;
    let (d, xi) = (delta_of(c), xi_of(c));
    let five = r(5, 1);
    Ok(AuditReport {
        lines: vec![
            AuditLine::strict("major-arc: 2xi + 16delta < 5", c, r(2, 1) * &xi + r(16, 1) * &d, five.clone(), false),
            AuditLine::strict("major-arc: 7xi + 14delta < 5", c, r(7, 1) * &xi + r(14, 1) * &d, five, false),
        ],
    })
}

/// The five exponents of the minor-arc sup bound against `4/3 - c/3`.
pub fn minor_arc_exponents(c: &Rational) -> [(&'static str, Rational); 5] {
    let (d, xi) = (delta_of(c), xi_of(c));
    [
        ("11c/82 + 29/41 + 25delta/82", r(11, 82) * c + r(29, 41) + r(25, 82) * &d),
        ("(374c + 2725)/3384 + 118delta/423", (r(374, 1) * c + r(2725, 1)) / r(3384, 1) + r(118, 423) * &d),
        ("5/6", r(5, 6)),
        ("3571/3384 + 118delta/423 - 659xi/1692", r(3571, 3384) + r(118, 423) * &d - r(659, 1692) * &xi),
        ("1 - xi/2", r(1, 1) - xi / r(2, 1)),
    ]
}

pub fn audit_minor_arc(c: &Rational) -> Result<AuditReport, ParamError> {
    check_closed(c)?;
    let target = r(4, 3) - c / r(3, 1);
    Ok(AuditReport {
        lines: minor_arc_exponents(c)
            .into_iter()
            .map(|(name, e)| AuditLine::strict(format!("minor-arc sup: {name} vs 4/3 - c/3"), c, e, target.clone(), true))
            .collect(),
    })
}

pub fn audit_fourth_moment(c: &Rational) -> Result<AuditReport, ParamError> {
    check_closed(c)?;
    let d = delta_of(c);
    let target = r(4, 1) - c;
    let a = r(13, 62) * c + r(17, 31) + r(13, 62) * &d + r(2, 1);
    let b = r(1, 1) - c / r(2, 1) + r(3, 2) * (r(4, 3) - c / r(3, 1)) + r(1, 1);
    Ok(AuditReport {
        lines: vec![
            AuditLine::strict("fourth moment (a): 13c/62 + 17/31 + 13delta/62 + 2 vs 4 - c", c, a, target.clone(), true),
            AuditLine::strict("fourth moment (b): 1 - c/2 + 3/2(4/3 - c/3) + 1 vs 4 - c", c, b, target, true),
        ],
    })
}

/// All exponent audits at one `c`.
pub fn audit_all(c: &Rational) -> Result<AuditReport, ParamError> {
    let mut rep = audit_major_arc(c)?;
    rep.extend(audit_minor_arc(c)?);
    rep.extend(audit_fourth_moment(c)?);
    Ok(rep)
}

/// Audits at both endpoints `c = 1` and `c = 1787/1502`.
pub fn certify_interval() -> AuditReport {
    let mut rep = audit_all(&r(1, 1)).expect("endpoint in range");
    rep.extend(audit_all(&c_max()).expect("endpoint in range"));
    rep
}

/// `n` equally spaced interior points of `(1, 1787/1502)`.
pub fn c_grid(n: usize) -> Vec<Rational> {
    let width = c_max() - r(1, 1);
    (1..=n as i64)
        .map(|k| r(1, 1) + width.clone() * r(k, n as i64 + 1))
        .collect()
}

pub fn audit_sweep(n: usize) -> AuditReport {
    let mut rep = certify_interval();
    for c in c_grid(n) {
        rep.extend(audit_all(&c).expect("grid point in range"));
    }
    rep
}
