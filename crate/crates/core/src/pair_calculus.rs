//! Van der Corput A/B calculus on exponent pairs.
//!
//! Pairs are generic over [`Field`]: use [`crate::ExactPair`] for exact
//! reproduction and `ExponentPair<f64>` for quick numerical exploration.
//! Words are written in operator order, so `ABA^3B` applies `B` first.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{fmt_rational, Field};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairError {
    #[error("pair ({kappa}, {lambda}) lies outside 0 <= kappa <= 1/2 <= lambda <= 1")]
    Inadmissible { kappa: f64, lambda: f64 },
    #[error("invalid process word {0:?}: expected letters A/B with optional ^n or n exponents")]
    BadWord(String),
    #[error("bound inputs out of domain: lambda1 = {lambda1}, a = {a} (need lambda1 > 0, a >= 1)")]
    Domain { lambda1: f64, a: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentPair<T> {
    pub kappa: T,
    pub lambda: T,
    /// Marks `(kappa + eps, lambda + eps)`.
    pub eps_slack: bool,
}

impl<T: Field> ExponentPair<T> {
    pub fn new(kappa: T, lambda: T) -> Self {
        ExponentPair { kappa, lambda, eps_slack: false }
    }

    pub fn with_eps(mut self, eps: bool) -> Self {
        self.eps_slack = eps;
        self
    }

    /// The trivial pair `(0, 1)`.
    pub fn trivial() -> Self {
        Self::new(T::zero(), T::one())
    }

    pub fn is_admissible(&self) -> bool {
        let half = T::from_ratio(1, 2);
        T::zero() <= self.kappa
            && self.kappa <= half
            && half <= self.lambda
            && self.lambda <= T::one()
    }

    fn check(self) -> Result<Self, PairError> {
        if self.is_admissible() {
            Ok(self)
        } else {
            Err(PairError::Inadmissible {
                kappa: self.kappa.to_f64(),
                lambda: self.lambda.to_f64(),
            })
        }
    }
}

impl ExponentPair<Rational> {
    pub fn from_ratios(kn: i64, kd: i64, ln: i64, ld: i64) -> Self {
        Self::new(Rational::from_ratio(kn, kd), Rational::from_ratio(ln, ld))
    }
}

impl fmt::Display for ExponentPair<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eps = if self.eps_slack { "+eps" } else { "" };
        write!(
            f,
            "({}{eps}, {}{eps})",
            fmt_rational(&self.kappa),
            fmt_rational(&self.lambda)
        )
    }
}

/// `(k, l) -> (k / (2k + 2), (k + l + 1) / (2k + 2))`.
pub fn a_process<T: Field>(p: &ExponentPair<T>) -> ExponentPair<T> {
    let two = T::from_ratio(2, 1);
    let den = two.clone() * p.kappa.clone() + two;
    ExponentPair {
        kappa: p.kappa.clone() / den.clone(),
        lambda: (p.kappa.clone() + p.lambda.clone() + T::one()) / den,
        eps_slack: p.eps_slack,
    }
}

/// `(k, l) -> (l - 1/2, k + 1/2)`.
pub fn b_process<T: Field>(p: &ExponentPair<T>) -> Result<ExponentPair<T>, PairError> {
    let half = T::from_ratio(1, 2);
    ExponentPair {
        kappa: p.lambda.clone() - half.clone(),
        lambda: p.kappa.clone() + half,
        eps_slack: p.eps_slack,
    }
    .check()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    A,
    B,
}

/// A word over `{A, B}`, stored left to right as written.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Process>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn prepend(&self, p: Process) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(p);
        v.extend_from_slice(&self.0);
        Word(v)
    }
}

impl FromStr for Word {
    type Err = PairError;

    /// Accepts `ABA^3B`, `ABA3B` or `A,B,A,A,A,B`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PairError::BadWord(s.to_string());
        let mut out = Vec::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace() && *c != ',').peekable();
        while let Some(c) = chars.next() {
            let letter = match c.to_ascii_uppercase() {
                'A' => Process::A,
                'B' => Process::B,
                _ => return Err(bad()),
            };
            if chars.peek() == Some(&'^') {
                chars.next();
            }
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let n: usize = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| bad())? };
            out.extend(std::iter::repeat(letter).take(n));
        }
        Ok(Word(out))
    }
}

impl fmt::Display for Word {
    /// Run-length form, e.g. `ABA^3B`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let run = self.0[i..].iter().take_while(|&&q| q == p).count();
            let c = if p == Process::A { 'A' } else { 'B' };
            if run == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Apply `word` to `seed`, rightmost letter first.
pub fn eval_word<T: Field>(
    word: &Word,
    seed: &ExponentPair<T>,
) -> Result<ExponentPair<T>, PairError> {
    let mut p = seed.clone().check()?;
    for step in word.0.iter().rev() {
        p = match step {
            Process::A => a_process(&p).check()?,
            Process::B => b_process(&p)?,
        };
    }
    Ok(p)
}

/// `lambda1^kappa * a^lambda + 1/lambda1`, the exponential-sum bound up to constants.
pub fn vdc_bound<T: Field>(p: &ExponentPair<T>, lambda1: f64, a: f64) -> Result<f64, PairError> {
    if !(lambda1 > 0.0 && a >= 1.0) {
        return Err(PairError::Domain { lambda1, a });
    }
    Ok(lambda1.powf(p.kappa.to_f64()) * a.powf(p.lambda.to_f64()) + lambda1.recip())
}

#[derive(Debug, Clone)]
pub struct Optimum {
    pub word: Word,
    pub pair: ExponentPair<Rational>,
    pub value: f64,
}

/// Exhaustive search over all words of length `<= max_len` applied to `(0, 1)`.
///
/// Identical pairs are merged, keeping the shortest, then lexicographically
/// smallest, word. The minimiser is chosen with the same tie-break.
pub fn optimize_word<F>(objective: F, max_len: usize) -> Optimum
where
    F: Fn(&ExponentPair<Rational>) -> f64,
{
    let seed = ExponentPair::<Rational>::trivial();
    let mut seen: HashMap<(Rational, Rational), Word> = HashMap::new();
    seen.insert((seed.kappa.clone(), seed.lambda.clone()), Word::default());

    let mut best = Optimum { value: objective(&seed), word: Word::default(), pair: seed.clone() };
    let mut frontier = vec![(Word::default(), seed)];

    for _ in 0..max_len {
        let mut next: Vec<(Word, ExponentPair<Rational>)> = Vec::new();
        let mut level: HashMap<(Rational, Rational), usize> = HashMap::new();
        for (word, pair) in &frontier {
            for step in [Process::A, Process::B] {
                let image = match step {
                    Process::A => a_process(pair),
                    // B maps admissible pairs to admissible pairs
                    Process::B => match b_process(pair) {
                        Ok(p) => p,
                        Err(_) => continue,
                    },
                };
                let key = (image.kappa.clone(), image.lambda.clone());
                if seen.contains_key(&key) {
                    continue;
                }
                let w = word.prepend(step);
                match level.get(&key) {
                    Some(&i) if next[i].0 <= w => {}
                    Some(&i) => next[i] = (w, image),
                    None => {
                        level.insert(key, next.len());
                        next.push((w, image));
                    }
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        for (w, p) in &next {
            seen.insert((p.kappa.clone(), p.lambda.clone()), w.clone());
            let v = objective(p);
            // shorter words were visited first; within a level words are sorted
            if v < best.value {
                best = Optimum { word: w.clone(), pair: p.clone(), value: v };
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    best
}

/// Every distinct pair reachable from `(0, 1)` with words of length `<= max_len`.
pub fn enumerate_pairs(max_len: usize) -> Vec<(Word, ExponentPair<Rational>)> {
    let seed = ExponentPair::<Rational>::trivial();
    let mut out = vec![(Word::default(), seed.clone())];
    let mut frontier = vec![(Word::default(), seed)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, pair) in &frontier {
            next.push((word.prepend(Process::A), a_process(pair)));
            if let Ok(b) = b_process(pair) {
                next.push((word.prepend(Process::B), b));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
