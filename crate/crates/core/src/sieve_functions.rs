//! Upper and lower linear-sieve functions `F(s)`, `f(s)` and the margins
//! built from them.
//!
//! `F(s) = 2e^γ/s` on `[1, 3]` and `2e^γ/s (1 + ∫_2^{s-1} log(t-1)/t dt)` on
//! `[3, 5]`; `f(s) = 2e^γ log(s-1)/s` on `[2, 4]`. Nothing is extrapolated.

use serde::Serialize;
use thiserror::Error;

use crate::quadrature::{adaptive_simpson, GaussLegendre, QuadError, QuadratureConfig};
use crate::scalar::{euler_gamma, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SieveFnError {
    #[error("{func}(s) is defined only for {lo} <= s <= {hi}, got s = {s}")]
    Domain { func: &'static str, s: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

fn domain<T: Real>(func: &'static str, s: T, lo: f64, hi: f64) -> Result<(), SieveFnError> {
    let sf = s.to_f64().unwrap_or(f64::NAN);
    if sf >= lo && sf <= hi {
        Ok(())
    } else {
        Err(SieveFnError::Domain { func, s: sf, lo, hi })
    }
}

fn two_e_gamma<T: Real>() -> T {
    T::lit(2.0) * euler_gamma::<T>().exp()
}

fn log_ratio_integrand<T: Real>(t: T) -> T {
    (t - T::one()).ln() / t
}

/// `∫_2^{s-1} log(t-1)/t dt` by adaptive Simpson.
pub fn tail_integral<T: Real>(s: T, cfg: &QuadratureConfig<T>) -> Result<T, SieveFnError> {
    let hi = s - T::one();
    let two = T::lit(2.0);
    if hi <= two {
        return Ok(T::zero());
    }
    Ok(adaptive_simpson(log_ratio_integrand, two, hi, cfg)?)
}

/// The same integral by a 32-point Gauss–Legendre rule on 16 panels.
pub fn tail_integral_gauss<T: Real>(s: T) -> T {
    let hi = s - T::one();
    let two = T::lit(2.0);
    if hi <= two {
        return T::zero();
    }
    GaussLegendre::<T>::new(32).composite(log_ratio_integrand, two, hi, 16)
}

#[allow(non_snake_case)]
pub fn upper_F<T: Real>(s: T, cfg: &QuadratureConfig<T>) -> Result<T, SieveFnError> {
    domain("F", s, 1.0, 5.0)?;
    let lead = two_e_gamma::<T>() / s;
    if s <= T::lit(3.0) {
        return Ok(lead);
    }
    Ok(lead * (T::one() + tail_integral(s, cfg)?))
}

/// [`upper_F`] with the Gauss–Legendre integral, used as an independent route.
#[allow(non_snake_case)]
pub fn upper_F_gauss<T: Real>(s: T) -> Result<T, SieveFnError> {
    domain("F", s, 1.0, 5.0)?;
    let lead = two_e_gamma::<T>() / s;
    if s <= T::lit(3.0) {
        return Ok(lead);
    }
    Ok(lead * (T::one() + tail_integral_gauss(s)))
}

pub fn lower_f<T: Real>(s: T) -> Result<T, SieveFnError> {
    domain("f", s, 2.0, 4.0)?;
    Ok(two_e_gamma::<T>() / s * (s - T::one()).ln())
}

/// `2 f(s0) - F(s0)`, the leading coefficient of the binary lower bound.
pub fn binary_margin<T: Real>(s0: T, cfg: &QuadratureConfig<T>) -> Result<T, SieveFnError> {
    Ok(T::lit(2.0) * lower_f(s0)? - upper_F(s0, cfg)?)
}

/// `(4e^γ/s0)(log(s0 - 1) - 1/2)`, valid for `2 <= s0 <= 3`.
pub fn binary_margin_closed<T: Real>(s0: T) -> T {
    T::lit(4.0) * euler_gamma::<T>().exp() / s0 * ((s0 - T::one()).ln() - T::lit(0.5))
}

/// `4 f(s0) - 3 F(s0)`, the leading coefficient of the quaternary lower bound.
pub fn quaternary_margin<T: Real>(s0: T, cfg: &QuadratureConfig<T>) -> Result<T, SieveFnError> {
    domain("quaternary margin", s0, 3.0, 4.0)?;
    Ok(T::lit(4.0) * lower_f(s0)? - T::lit(3.0) * upper_F(s0, cfg)?)
}

pub fn quaternary_margin_gauss<T: Real>(s0: T) -> Result<T, SieveFnError> {
    domain("quaternary margin", s0, 3.0, 4.0)?;
    Ok(T::lit(4.0) * lower_f(s0)? - T::lit(3.0) * upper_F_gauss(s0)?)
}

/// Lower bound claimed for the quaternary coefficient at `s0 = 62451/20000`.
pub const QUATERNARY_CLAIMED_BOUND: f64 = 0.00027;

/// Sieving levels used by the two theorems: `s0 = delta / eta_j`.
pub const BINARY_LEVEL: f64 = 53.0 / 20.0;
pub const QUATERNARY_LEVEL: f64 = 62451.0 / 20000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginMode {
    Binary,
    Quaternary,
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveConstants {
    pub s0: f64,
    pub mode: MarginMode,
    #[serde(rename = "F")]
    pub upper: f64,
    #[serde(rename = "f")]
    pub lower: f64,
    pub margin: f64,
    pub passes_paper_bound: bool,
}

/// Evaluate both functions and the requested margin at `s0`.
///
/// The bound checked is `margin > 0` for binary mode and
/// `margin >= 0.00027` for quaternary mode.
pub fn sieve_constants(s0: f64, mode: MarginMode) -> Result<SieveConstants, SieveFnError> {
    let cfg = QuadratureConfig::default();
    let upper = upper_F(s0, &cfg)?;
    let lower = lower_f(s0)?;
    let (margin, passes) = match mode {
        MarginMode::Binary => {
            let m = binary_margin(s0, &cfg)?;
            (m, m > 0.0)
        }
        MarginMode::Quaternary => {
            let m = quaternary_margin(s0, &cfg)?;
            (m, m >= QUATERNARY_CLAIMED_BOUND)
        }
    };
    Ok(SieveConstants { s0, mode, upper, lower, margin, passes_paper_bound: passes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    fn eg() -> f64 {
        euler_gamma::<f64>().exp()
    }

    #[test]
    fn upper_examples() {
        assert!((upper_F(2.0, &cfg()).unwrap() - 1.781_072_417_990_197_9).abs() < 1e-15);
        assert!((upper_F(3.0, &cfg()).unwrap() - 2.0 * eg() / 3.0).abs() < 1e-15);
        // frozen from an independent 30-digit evaluation
        let v = upper_F(QUATERNARY_LEVEL, &cfg()).unwrap();
        assert!((v - 1.144_738_845_429_839_8).abs() < 1e-12, "{v}");
    }

    #[test]
    fn lower_examples() {
        assert_eq!(lower_f(2.0).unwrap(), 0.0);
        let v = lower_f(BINARY_LEVEL).unwrap();
        assert!((v - 40.0 * eg() / 53.0 * (33.0f64 / 20.0).ln()).abs() < 1e-15);
        assert!((v - 0.673_144_945_593_988_5).abs() < 1e-14);
        assert!((lower_f(3.0).unwrap() - 2.0 * eg() / 3.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn domains_are_exact() {
        assert!(upper_F(0.99, &cfg()).is_err());
        assert!(upper_F(5.01, &cfg()).is_err());
        assert!(upper_F(5.0, &cfg()).is_ok());
        assert!(lower_f(1.99).is_err());
        assert!(lower_f(4.01).is_err());
        assert!(quaternary_margin(2.9, &cfg()).is_err());
    }

    #[test]
    fn binary_margin_values() {
        let m = binary_margin(BINARY_LEVEL, &cfg()).unwrap();
        let closed = 80.0 * eg() / 53.0 * ((33.0f64 / 20.0).ln() - 0.5);
        assert!((m - closed).abs() < 1e-12);
        assert!((m - 2.084_292_704_808_735_5e-3).abs() < 1e-13);
        assert!((binary_margin(2.0, &cfg()).unwrap() + eg()).abs() < 1e-15);
    }

    #[test]
    fn binary_margin_matches_closed_form_below_three() {
        for k in 0..=100 {
            let s = 2.0 + k as f64 / 100.0;
            let m = binary_margin(s, &cfg()).unwrap();
            assert!((m - binary_margin_closed(s)).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_margin_root() {
        let root = 1.0 + 0.5f64.exp();
        assert!(binary_margin(root, &cfg()).unwrap().abs() < 1e-15);
        // sign change brackets the root within 1e-6
        assert!(binary_margin(root - 1e-6, &cfg()).unwrap() < 0.0);
        assert!(binary_margin(root + 1e-6, &cfg()).unwrap() > 0.0);
    }

    #[test]
    fn quaternary_margin_values() {
        let m = quaternary_margin(QUATERNARY_LEVEL, &cfg()).unwrap();
        // 30-digit reference: 7.27728088368597298809e-5
        assert!((m - 7.277_280_883_685_973e-5).abs() < 1e-13, "{m}");
        let g = quaternary_margin_gauss(QUATERNARY_LEVEL).unwrap();
        assert!((m - g).abs() < 1e-12);
        let at3 = quaternary_margin(3.0, &cfg()).unwrap();
        assert!((at3 - 2.0 * eg() / 3.0 * (4.0 * 2f64.ln() - 3.0)).abs() < 1e-14);
        assert!(at3 < 0.0);
        let at4 = quaternary_margin(4.0, &cfg()).unwrap();
        assert!((at4 - 0.848_491_433_203_489_6).abs() < 1e-12, "{at4}");
    }

    #[test]
    fn monotone_and_sandwiched() {
        let mut prev = f64::INFINITY;
        for k in 0..=200 {
            let s = 1.0 + 2.0 * k as f64 / 200.0;
            let v = upper_F(s, &cfg()).unwrap();
            assert!(v < prev);
            prev = v;
        }
        let mut prev = -1.0;
        for k in 0..=150 {
            let s = 2.0 + 1.5 * k as f64 / 150.0;
            let v = lower_f(s).unwrap();
            assert!(v > prev);
            prev = v;
        }
        for k in 0..=200 {
            let s = 2.0 + 2.0 * k as f64 / 200.0;
            assert!(lower_f(s).unwrap() <= upper_F(s, &cfg()).unwrap());
        }
    }

    #[test]
    fn branch_continuity_at_three() {
        let left = upper_F(3.0, &cfg()).unwrap();
        let right = upper_F(3.0 + 1e-9, &cfg()).unwrap();
        assert!((left - right).abs() < 1e-9);
    }

    #[test]
    fn tolerance_halving_is_stable() {
        for &s in &[3.2, 3.6, 4.0, 4.5, 5.0] {
            let coarse = QuadratureConfig::with_tolerance(1e-8);
            let fine = QuadratureConfig::with_tolerance(5e-9);
            let a: f64 = upper_F(s, &coarse).unwrap();
            let b = upper_F(s, &fine).unwrap();
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn single_precision_route() {
        let m = binary_margin(BINARY_LEVEL as f32, &QuadratureConfig::default()).unwrap();
        assert!((m as f64 - 2.084e-3).abs() < 1e-5);
    }

    #[test]
    fn constants_report() {
        let b = sieve_constants(BINARY_LEVEL, MarginMode::Binary).unwrap();
        assert!(b.passes_paper_bound);
        let q = sieve_constants(QUATERNARY_LEVEL, MarginMode::Quaternary).unwrap();
        assert!(!q.passes_paper_bound);
        assert!(q.margin > 0.0);
    }
}
