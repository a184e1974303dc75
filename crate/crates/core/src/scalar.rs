//! Scalar abstractions shared by the exact and floating-point layers.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// An ordered field the exponent-pair calculus can run over.
///
/// Implemented for [`BigRational`] (exact) and for `f32`/`f64` (fast
/// exploration). Only field operations and comparison are needed.
pub trait Field:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Field for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Field for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

/// Floating-point scalar used by quadrature and the sieve functions.
pub trait Real: Float + FloatConst + FromPrimitive + Signed + Debug + Display + Send + Sync {
    /// Lift an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Euler–Mascheroni constant to 30 significant digits.
///
/// Source value: 0.577215664901532860606512090082.
pub const EULER_GAMMA_STR: &str = "0.577215664901532860606512090082";

pub fn euler_gamma<T: Real>() -> T {
    // f64 parses the 30-digit string to the nearest double.
    T::lit(EULER_GAMMA_STR.parse::<f64>().expect("valid literal"))
}

/// Parse `"p/q"`, `"p"`, or a decimal like `"1.15"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

/// Format as `"p/q"` (or `"p"` for integers).
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse a real given as `1e6`, `1000000` or `p/q`.
pub fn parse_real(s: &str) -> Option<f64> {
    if s.contains('/') {
        return parse_rational(s).map(|r| Field::to_f64(&r));
    }
    s.trim().parse().ok()
}
