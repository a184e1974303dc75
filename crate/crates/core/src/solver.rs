//! Counting prime solutions of `|p1^c + p2^c - R| < Δ` and
//! `|p1^c + p2^c + p3^c + p4^c - N| < Δ`, with geometric main-term predictions.
//!
//! Tuples are ordered. A tuple counts iff the window holds in double precision,
//! with sums associated as `(v1 + v2) - R` and `((v1 + v2) + (v3 + v4)) - N`;
//! ties at exactly `Δ` are excluded.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::analytic_eval::irwin_hall_cdf;
use crate::prime_tables::{PrimeTable, TableError};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("X = {x} exceeds the prime table limit {limit}")]
    Range { x: f64, limit: u64 },
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("{pairs} pair sums exceed the budget of {budget}; lower X")]
    MemoryBudget { pairs: u64, budget: u64 },
    #[error("grid too coarse: Delta = {delta} is below the cell width {cell} even after refinement")]
    GridResolution { delta: f64, cell: f64 },
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Condition imposed on `p + 2` for every prime in a tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    None,
    /// No prime factor `q` with `2 < q < z`.
    ZRough(f64),
    /// At most `r` prime factors counted with multiplicity.
    OmegaLe(u32),
}

impl Constraint {
    pub fn admits(&self, table: &PrimeTable, p: u64) -> Result<bool, TableError> {
        match *self {
            Constraint::None => Ok(true),
            Constraint::ZRough(z) => table.is_z_rough(p + 2, z),
            Constraint::OmegaLe(r) => Ok(table.big_omega(p + 2)? <= r),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::None => write!(f, "none"),
            Constraint::ZRough(z) => write!(f, "zrough:{z}"),
            Constraint::OmegaLe(r) => write!(f, "omega:{r}"),
        }
    }
}

impl FromStr for Constraint {
    type Err = String;

    /// `none`, `zrough:<z>` or `omega:<r>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad constraint {s:?}: expected none, zrough:<z> or omega:<r>");
        match s.split_once(':') {
            None if s == "none" => Ok(Constraint::None),
            Some(("zrough", z)) => z.parse().map(Constraint::ZRough).map_err(|_| bad()),
            Some(("omega", r)) => r.parse().map(Constraint::OmegaLe).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Constraint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Unit,
    Log,
}

impl FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(Weighting::Unit),
            "log" => Ok(Weighting::Log),
            _ => Err(format!("bad weighting {s:?}: expected unit or log")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    pub c: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    pub mu: f64,
    #[serde(rename = "X")]
    pub x: f64,
    pub constraint: Constraint,
    pub weighting: Weighting,
    /// Largest pair-sum array the quaternary search may allocate.
    pub pair_budget: u64,
}

/// Hard ceiling on the pair-sum array.
pub const PAIR_CAP: u64 = 1 << 31;
pub const DEFAULT_PAIR_BUDGET: u64 = 1 << 26;

impl SearchConfig {
    pub fn new(c: f64, delta: f64, mu: f64, x: f64) -> Self {
        SearchConfig {
            c,
            delta,
            mu,
            x,
            constraint: Constraint::None,
            weighting: Weighting::Unit,
            pair_budget: DEFAULT_PAIR_BUDGET,
        }
    }

    pub fn with_constraint(mut self, constraint: Constraint) -> Self {
        self.constraint = constraint;
        self
    }

    pub fn with_weighting(mut self, weighting: Weighting) -> Self {
        self.weighting = weighting;
        self
    }

    fn validate(&self) -> Result<(), SolverError> {
        if !(self.c >= 1.0 && self.delta > 0.0 && (0.0..1.0).contains(&self.mu) && self.x >= 2.0) {
            return Err(SolverError::Config(format!(
                "need c >= 1, Delta > 0, 0 <= mu < 1, X >= 2; got c = {}, Delta = {}, mu = {}, X = {}",
                self.c, self.delta, self.mu, self.x
            )));
        }
        Ok(())
    }

    fn weight(&self, p: u64) -> f64 {
        match self.weighting {
            Weighting::Unit => 1.0,
            Weighting::Log => (p as f64).ln(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exemplar {
    pub primes: Vec<u64>,
    /// `|Σ p_i^c - target|`.
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub target: f64,
    pub count: u64,
    pub weighted: f64,
    pub exemplars: Vec<Exemplar>,
    pub prediction: f64,
    /// `weighted / prediction`, or 0 when the prediction is 0.
    pub ratio: f64,
    pub warnings: Vec<String>,
    /// Wall-clock time; left out of serialized reports so they stay reproducible.
    #[serde(skip)]
    pub elapsed: std::time::Duration,
}

pub const MAX_EXEMPLARS: usize = 10;

/// Admissible primes and their sorted powers, reusable across targets.
#[derive(Debug, Clone)]
pub struct Searcher<'t> {
    pub cfg: SearchConfig,
    table: &'t PrimeTable,
    pub primes: Vec<u64>,
    /// `p^c`, ascending with `primes`.
    pub values: Vec<f64>,
    weights: Vec<f64>,
    /// `prefix[j] = Σ_{i < j} weights[i]`.
    prefix: Vec<f64>,
    pub warnings: Vec<String>,
}

impl<'t> Searcher<'t> {
    pub fn new(cfg: &SearchConfig, table: &'t PrimeTable) -> Result<Self, SolverError> {
        cfg.validate()?;
        if cfg.x > table.limit() as f64 {
            return Err(SolverError::Range { x: cfg.x, limit: table.limit() });
        }
        let a = (cfg.mu * cfg.x).floor() as u64;
        let b = cfg.x.floor() as u64;
        let mut primes = Vec::new();
        for p in table.primes_in(a, b)? {
            if cfg.constraint.admits(table, p)? {
                primes.push(p);
            }
        }
        let values: Vec<f64> = primes.iter().map(|&p| (p as f64).powf(cfg.c)).collect();
        let weights: Vec<f64> = primes.iter().map(|&p| cfg.weight(p)).collect();
        let mut prefix = Vec::with_capacity(weights.len() + 1);
        prefix.push(0.0);
        for w in &weights {
            prefix.push(prefix.last().unwrap() + w);
        }
        let mut warnings = Vec::new();
        if primes.is_empty() {
            warnings.push(format!("no admissible primes in ({a}, {b}] under constraint {}", cfg.constraint));
        }
        Ok(Searcher { cfg: cfg.clone(), table, primes, values, weights, prefix, warnings })
    }

    fn verify(&self, primes: &[u64], target: f64) -> f64 {
        let v: Vec<f64> = primes.iter().map(|&p| (p as f64).powf(self.cfg.c)).collect();
        let sum = if v.len() == 2 { v[0] + v[1] } else { (v[0] + v[1]) + (v[2] + v[3]) };
        let dev = sum - target;
        assert!(-self.cfg.delta < dev && dev < self.cfg.delta, "exemplar {primes:?} outside the window");
        for &p in primes {
            assert!(
                self.table.is_prime(p) && self.cfg.constraint.admits(self.table, p).unwrap_or(false),
                "exemplar prime {p} fails the constraint"
            );
        }
        dev.abs()
    }

    fn finish(&self, target: f64, count: u64, weighted: f64, ex: Vec<Vec<u64>>, prediction: f64, t0: Instant) -> SolutionReport {
        let exemplars = ex
            .into_iter()
            .map(|primes| {
                let deviation = self.verify(&primes, target);
                Exemplar { primes, deviation }
            })
            .collect();
        SolutionReport {
            target,
            count,
            weighted,
            exemplars,
            prediction,
            ratio: if prediction > 0.0 { weighted / prediction } else { 0.0 },
            warnings: self.warnings.clone(),
            elapsed: t0.elapsed(),
        }
    }

    /// Count without prediction or exemplars.
    pub fn count_binary(&self, r: f64) -> (u64, f64) {
        let d = self.cfg.delta;
        let per: Vec<(u64, f64)> = self
            .values
            .par_iter()
            .enumerate()
            .map(|(i, &v1)| {
                let start = self.values.partition_point(|&v2| (v1 + v2) - r <= -d);
                let end = self.values.partition_point(|&v2| (v1 + v2) - r < d);
                let end = end.max(start);
                ((end - start) as u64, self.weights[i] * (self.prefix[end] - self.prefix[start]))
            })
            .collect();
        per.iter().fold((0, 0.0), |acc, &(n, w)| (acc.0 + n, acc.1 + w))
    }

    pub fn binary(&self, r: f64) -> Result<SolutionReport, SolverError> {
        if !(r > 0.0) {
            return Err(SolverError::Config(format!("target R must be positive, got {r}")));
        }
        let t0 = Instant::now();
        let (count, weighted) = self.count_binary(r);
        let d = self.cfg.delta;
        let mut ex = Vec::new();
        'outer: for (i, &v1) in self.values.iter().enumerate() {
            let start = self.values.partition_point(|&v2| (v1 + v2) - r <= -d);
            for j in start..self.values.len() {
                if (v1 + self.values[j]) - r >= d {
                    break;
                }
                ex.push(vec![self.primes[i], self.primes[j]]);
                if ex.len() == MAX_EXEMPLARS {
                    break 'outer;
                }
            }
        }
        let prediction = predict_binary_main(r, &self.cfg)?;
        Ok(self.finish(r, count, weighted, ex, prediction, t0))
    }

    pub fn quaternary(&self, n: f64) -> Result<SolutionReport, SolverError> {
        if !(n > 0.0) {
            return Err(SolverError::Config(format!("target N must be positive, got {n}")));
        }
        let t0 = Instant::now();
        let m = self.values.len() as u64;
        let pairs = m * m;
        let budget = self.cfg.pair_budget.min(PAIR_CAP);
        if pairs > budget {
            return Err(SolverError::MemoryBudget { pairs, budget });
        }
        let mut sums: Vec<(f64, u32, u32)> = Vec::with_capacity(pairs as usize);
        for (i, &a) in self.values.iter().enumerate() {
            for (j, &b) in self.values.iter().enumerate() {
                sums.push((a + b, i as u32, j as u32));
            }
        }
        sums.par_sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
        let pw = |s: &(f64, u32, u32)| self.weights[s.1 as usize] * self.weights[s.2 as usize];
        let mut prefix = Vec::with_capacity(sums.len() + 1);
        prefix.push(0.0);
        for s in &sums {
            prefix.push(prefix.last().unwrap() + pw(s));
        }
        let d = self.cfg.delta;
        let window = |sa: f64| {
            let start = sums.partition_point(|sb| (sa + sb.0) - n <= -d);
            let end = sums.partition_point(|sb| (sa + sb.0) - n < d).max(start);
            (start, end)
        };
        let per: Vec<(u64, f64)> = sums
            .par_iter()
            .map(|a| {
                let (start, end) = window(a.0);
                ((end - start) as u64, pw(a) * (prefix[end] - prefix[start]))
            })
            .collect();
        let (count, weighted) = per.iter().fold((0, 0.0), |acc, &(k, w)| (acc.0 + k, acc.1 + w));

        let mut ex = Vec::new();
        'outer: for a in &sums {
            let (start, end) = window(a.0);
            for b in &sums[start..end] {
                ex.push([a.1, a.2, b.1, b.2].iter().map(|&k| self.primes[k as usize]).collect());
                if ex.len() == MAX_EXEMPLARS {
                    break 'outer;
                }
            }
        }
        let prediction = predict_quaternary_main(n, &self.cfg)?.volume;
        Ok(self.finish(n, count, weighted, ex, prediction, t0))
    }
}

pub fn search_binary(r: f64, cfg: &SearchConfig, table: &PrimeTable) -> Result<SolutionReport, SolverError> {
    Searcher::new(cfg, table)?.binary(r)
}

pub fn search_quaternary(n: f64, cfg: &SearchConfig, table: &PrimeTable) -> Result<SolutionReport, SolverError> {
    Searcher::new(cfg, table)?.quaternary(n)
}

/// Measure of `{(t1, t2) in (μX, X]^2 : |t1^c + t2^c - R| < Δ}`, with density
/// `1/(log t1 log t2)` under unit weighting. The constraint is not modelled.
pub fn predict_binary_main(r: f64, cfg: &SearchConfig) -> Result<f64, SolverError> {
    cfg.validate()?;
    let (a, b, c, d) = (cfg.mu * cfg.x, cfg.x, cfg.c, cfg.delta);
    if cfg.weighting == Weighting::Unit && a < 2.0 {
        return Err(SolverError::Config("unit weighting needs mu X >= 2".into()));
    }
    let (ac, bc) = (a.powf(c), b.powf(c));
    let inv = 1.0 / c;
    let root = |v: f64| if v <= 0.0 { 0.0 } else { v.powf(inv) };
    let gl = GaussLegendre::<f64>::new(16);
    let inner = |t1: f64| {
        let rest = r - t1.powf(c);
        let lo = root(rest - d).max(a);
        let hi = root(rest + d).min(b);
        if hi <= lo {
            return 0.0;
        }
        match cfg.weighting {
            Weighting::Log => hi - lo,
            Weighting::Unit => gl.integrate(|t: f64| 1.0 / t.ln(), lo, hi) / t1.ln(),
        }
    };
    let mut cuts = vec![a, b];
    for v in [r - d - ac, r + d - ac, r - d - bc, r + d - bc, r - d, r + d] {
        let t = root(v);
        if t > a && t < b {
            cuts.push(t);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut area = 0.0;
    for w in cuts.windows(2) {
        area += gl.composite(inner, w[0], w[1], 32);
    }
    Ok(area)
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumePrediction {
    pub volume: f64,
    pub cells: usize,
    pub cell_width: f64,
    pub warnings: Vec<String>,
}

pub const DEFAULT_CELLS: usize = 1 << 14;
pub const MAX_CELLS: usize = 1 << 18;

/// Measure of `{t in (μX, X]^4 : |Σ t_i^c - N| < Δ}` by convolving the
/// density of `u = t^c` with itself on a uniform grid.
///
/// Mass inside a cell is treated as uniform, so the window is integrated
/// exactly against the Irwin–Hall law of four within-cell offsets.
pub fn predict_quaternary_main(n: f64, cfg: &SearchConfig) -> Result<VolumePrediction, SolverError> {
    cfg.validate()?;
    let (a, b, c, d) = (cfg.mu * cfg.x, cfg.x, cfg.c, cfg.delta);
    if cfg.weighting == Weighting::Unit && a < 2.0 {
        return Err(SolverError::Config("unit weighting needs mu X >= 2".into()));
    }
    let (u0, u1) = (a.powf(c), b.powf(c));
    let mut cells = DEFAULT_CELLS;
    let mut warnings = Vec::new();
    if (u1 - u0) / cells as f64 > d {
        let want = ((u1 - u0) / d).ceil() as usize;
        let refined = want.next_power_of_two();
        if refined > MAX_CELLS {
            return Err(SolverError::GridResolution { delta: d, cell: (u1 - u0) / MAX_CELLS as f64 });
        }
        warnings.push(format!("Delta below one cell width; grid refined from {cells} to {refined} cells"));
        cells = refined;
    }
    let h = (u1 - u0) / cells as f64;
    let inv = 1.0 / c;
    let gl = GaussLegendre::<f64>::new(8);
    let mass: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|k| {
            let lo = u0 + h * k as f64;
            let hi = if k + 1 == cells { u1 } else { lo + h };
            let (t0, t1) = (lo.powf(inv), hi.powf(inv));
            match cfg.weighting {
                Weighting::Log => t1 - t0,
                Weighting::Unit => gl.integrate(|t: f64| 1.0 / t.ln(), t0, t1),
            }
        })
        .collect();

    let len = 4 * cells;
    let mut buf: Vec<Complex<f64>> = mass.iter().map(|&m| Complex::new(m, 0.0)).collect();
    buf.resize(len, Complex::new(0.0, 0.0));
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(len).process(&mut buf);
    for z in &mut buf {
        let z2 = *z * *z;
        *z = z2 * z2;
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / len as f64;

    // sum = 4 u0 + h (k + offsets), offsets ~ Irwin–Hall(4)
    let lo = (n - d - 4.0 * u0) / h;
    let hi = (n + d - 4.0 * u0) / h;
    let k_min = (lo - 4.0).floor().max(0.0) as usize;
    let k_max = (hi.ceil().max(0.0) as usize).min(len - 1);
    let mut volume = 0.0;
    if k_min <= k_max {
        for (k, z) in buf.iter().enumerate().take(k_max + 1).skip(k_min) {
            let kf = k as f64;
            let p = irwin_hall_cdf(4, hi - kf) - irwin_hall_cdf(4, lo - kf);
            volume += z.re * scale * p;
        }
    }
    Ok(VolumePrediction { volume: volume.max(0.0), cells, cell_width: h, warnings })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSample {
    #[serde(rename = "R")]
    pub r: f64,
    pub count: u64,
    pub weighted: f64,
    pub prediction: f64,
    pub ratio: f64,
    #[serde(skip)]
    pub exemplars: Vec<Exemplar>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExceptionalReport {
    #[serde(rename = "N")]
    pub n: f64,
    pub seed: u64,
    pub samples: usize,
    pub fraction_zero: f64,
    /// Buckets `0`, `1`, `2-3`, `4-7`, ... with their sample counts.
    pub histogram: Vec<(String, u64)>,
    pub ratio_min: f64,
    pub ratio_median: f64,
    pub ratio_max: f64,
    pub rows: Vec<ScanSample>,
    pub warnings: Vec<String>,
}

/// The `i`-th target: uniform in `(N, 2N]` from stream `i` of the seeded generator,
/// independent of how samples are scheduled.
pub fn sample_target(n: f64, seed: u64, i: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    let u: f64 = rng.gen();
    n + n * (1.0 - u)
}

fn bucket(count: u64) -> String {
    match count {
        0 => "0".into(),
        1 => "1".into(),
        _ => {
            let lo = 1u64 << (63 - count.leading_zeros());
            format!("{}-{}", lo, 2 * lo - 1)
        }
    }
}

pub fn scan_exceptional(
    n: f64,
    samples: usize,
    cfg: &SearchConfig,
    table: &PrimeTable,
    seed: u64,
) -> Result<ExceptionalReport, SolverError> {
    if samples == 0 {
        return Err(SolverError::Config("samples must be at least 1".into()));
    }
    let searcher = Searcher::new(cfg, table)?;
    let rows = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let r = sample_target(n, seed, i);
            let rep = searcher.binary(r)?;
            Ok(ScanSample {
                r,
                count: rep.count,
                weighted: rep.weighted,
                prediction: rep.prediction,
                ratio: rep.ratio,
                exemplars: rep.exemplars,
            })
        })
        .collect::<Result<Vec<_>, SolverError>>()?;

    let zeros = rows.iter().filter(|s| s.count == 0).count();
    let mut histogram: Vec<(String, u64)> = Vec::new();
    let mut keys: Vec<u64> = rows.iter().map(|s| s.count).collect();
    keys.sort_unstable();
    for k in keys {
        let label = bucket(k);
        match histogram.last_mut() {
            Some((l, m)) if *l == label => *m += 1,
            _ => histogram.push((label, 1)),
        }
    }
    let mut ratios: Vec<f64> = rows.iter().map(|s| s.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let mid = ratios.len() / 2;
    let ratio_median = if ratios.len() % 2 == 1 { ratios[mid] } else { (ratios[mid - 1] + ratios[mid]) / 2.0 };
    Ok(ExceptionalReport {
        n,
        seed,
        samples,
        fraction_zero: zeros as f64 / samples as f64,
        histogram,
        ratio_min: ratios[0],
        ratio_median,
        ratio_max: ratios[ratios.len() - 1],
        rows,
        warnings: searcher.warnings.clone(),
    })
}
