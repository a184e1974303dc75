//! Finite checks for the Piatetski-Shapiro type inequalities
//! `|p1^c + p2^c - R| < Δ` and `|p1^c + ... + p4^c - N| < Δ` with almost-prime shifts.
//!
//! Exact pieces (exponent pairs, parameter audits, sieve weights) use
//! [`Rational`]; numerical pieces are generic over [`scalar::Real`] where it
//! costs nothing and concrete `f64` elsewhere.

pub mod analytic_eval;
pub mod pair_calculus;
pub mod param_audit;
pub mod prime_tables;
pub mod quadrature;
pub mod rosser_sieve;
pub mod scalar;
pub mod sieve_functions;
pub mod solver;

pub type Rational = num_rational::BigRational;
pub type ExactPair = pair_calculus::ExponentPair<Rational>;
pub type Pair64 = pair_calculus::ExponentPair<f64>;
