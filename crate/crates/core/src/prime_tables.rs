//! Primality bitset and `Ω(n)` table.
//!
//! Primality comes from a segmented sieve of Eratosthenes (segments sieved in
//! parallel); `Ω` from a linear sieve. The two are built independently, so
//! `omega[n] == 1 <=> prime(n)` is a cross-check, not a tautology.
//!
//! Memory is about `1.16 * (limit + 3)` bytes (plus `4 * (limit + 3)` with
//! the optional smallest-prime-factor array). Limits above `10^9` are refused.
//!
//! # Cache layout
//!
//! All integers little-endian:
//!
//! | offset | size | field |
//! |---|---|---|
//! | 0 | 4 | magic `DIOC` |
//! | 4 | 4 | version (`u32`, currently 1) |
//! | 8 | 8 | limit (`u64`) |
//! | 16 | `8 * ceil((limit + 3) / 64)` | primality bitset, `u64` words, bit `n % 64` of word `n / 64` |
//! | ... | `limit + 3` | `Ω(n)` for `n = 0..=limit + 2` (`Ω(0) = Ω(1) = 0`) |

use std::io::{self, Read, Write};

use rayon::prelude::*;
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"DIOC";
pub const FORMAT_VERSION: u32 = 1;
pub const MIN_LIMIT: u64 = 100;
pub const MAX_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("limit {limit} outside supported range [{MIN_LIMIT}, {max}]")]
    Budget { limit: u64, max: u64 },
    #[error("{what} = {value} exceeds table range {max}")]
    Range { what: &'static str, value: u64, max: u64 },
    #[error("empty or reversed interval ({a}, {b}]")]
    Interval { a: u64, b: u64 },
    #[error("bad cache file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy)]
pub struct TableConfig {
    /// Bytes of bitset per sieving segment.
    pub segment_bytes: usize,
    pub with_spf: bool,
    pub max_limit: u64,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig { segment_bytes: 1 << 18, with_spf: false, max_limit: MAX_LIMIT }
    }
}

#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    omega: Vec<u8>,
    spf: Option<Vec<u32>>,
    /// Primes up to `sqrt(limit + 2)` for trial division when `spf` is absent.
    small_primes: Vec<u64>,
}

pub fn build_tables(limit: u64) -> Result<PrimeTable, TableError> {
    PrimeTable::build(limit, &TableConfig::default())
}

fn simple_sieve(n: usize) -> Vec<u64> {
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn segmented_bits(top: u64, segment_bytes: usize) -> Vec<u64> {
    let words = (top as usize + 1).div_ceil(64);
    let base = simple_sieve(isqrt(top) as usize);
    let mut bits = vec![!0u64; words];
    let seg_words = (segment_bytes / 8).max(1);
    bits.par_chunks_mut(seg_words).enumerate().for_each(|(idx, seg)| {
        let lo = (idx * seg_words * 64) as u64;
        let hi = lo + (seg.len() * 64) as u64; // exclusive
        for &p in &base {
            if p * p >= hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut m = start;
            while m < hi {
                let off = (m - lo) as usize;
                seg[off >> 6] &= !(1u64 << (off & 63));
                m += p;
            }
        }
    });
    bits[0] &= !0b11;
    let used = (top as usize + 1) % 64;
    if used != 0 {
        *bits.last_mut().expect("nonempty") &= (1u64 << used) - 1;
    }
    bits
}

/// Linear sieve: every composite is written exactly once, by its smallest prime.
fn linear_omega(top: usize, want_spf: bool) -> (Vec<u8>, Option<Vec<u32>>) {
    let mut omega = vec![0u8; top + 1];
    let mut spf = want_spf.then(|| vec![0u32; top + 1]);
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=top {
        if omega[i] == 0 {
            omega[i] = 1;
            primes.push(i as u32);
            if let Some(s) = spf.as_mut() {
                s[i] = i as u32;
            }
        }
        let oi = omega[i];
        for &p in &primes {
            let m = p as usize * i;
            if m > top {
                break;
            }
            omega[m] = oi + 1;
            if let Some(s) = spf.as_mut() {
                s[m] = p;
            }
            if i % p as usize == 0 {
                break;
            }
        }
    }
    (omega, spf)
}

impl PrimeTable {
    pub fn build(limit: u64, cfg: &TableConfig) -> Result<PrimeTable, TableError> {
        if !(MIN_LIMIT..=cfg.max_limit).contains(&limit) {
            return Err(TableError::Budget { limit, max: cfg.max_limit });
        }
        let top = limit + 2;
        let (bits, (omega, spf)) = rayon::join(
            || segmented_bits(top, cfg.segment_bytes),
            || linear_omega(top as usize, cfg.with_spf),
        );
        Ok(PrimeTable { limit, bits, omega, spf, small_primes: simple_sieve(isqrt(top) as usize + 1) })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Largest `n` the table answers for (`limit + 2`).
    pub fn top(&self) -> u64 {
        self.limit + 2
    }

    fn check(&self, what: &'static str, n: u64) -> Result<(), TableError> {
        if n > self.top() {
            Err(TableError::Range { what, value: n, max: self.top() })
        } else {
            Ok(())
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.top() && (self.bits[(n >> 6) as usize] >> (n & 63)) & 1 == 1
    }

    pub fn big_omega(&self, n: u64) -> Result<u32, TableError> {
        self.check("n", n)?;
        Ok(u32::from(self.omega[n as usize]))
    }

    pub fn has_spf(&self) -> bool {
        self.spf.is_some()
    }

    /// Primes in `(a, b]`, ascending.
    pub fn primes_in(&self, a: u64, b: u64) -> Result<Vec<u64>, TableError> {
        self.check("b", b)?;
        if b < a {
            return Err(TableError::Interval { a, b });
        }
        let mut out = Vec::new();
        let lo = a + 1;
        if lo > b {
            return Ok(out);
        }
        let (w0, w1) = ((lo >> 6) as usize, (b >> 6) as usize);
        for w in w0..=w1 {
            let mut word = self.bits[w];
            let base = (w as u64) << 6;
            if w == w0 {
                word &= !0u64 << (lo & 63);
            }
            if w == w1 && (b & 63) != 63 {
                word &= (1u64 << ((b & 63) + 1)) - 1;
            }
            while word != 0 {
                out.push(base + u64::from(word.trailing_zeros()));
                word &= word - 1;
            }
        }
        Ok(out)
    }

    pub fn prime_count(&self, upto: u64) -> Result<u64, TableError> {
        self.check("n", upto)?;
        let full = (upto >> 6) as usize;
        let mut count: u64 = self.bits[..full].iter().map(|w| u64::from(w.count_ones())).sum();
        let rem = upto & 63;
        let mask = if rem == 63 { !0 } else { (1u64 << (rem + 1)) - 1 };
        count += u64::from((self.bits[full] & mask).count_ones());
        Ok(count)
    }

    /// Prime factorisation `[(p, e)]`, ascending.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>, TableError> {
        self.check("n", n)?;
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut push = |p: u64| match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        };
        let mut m = n;
        if let Some(spf) = &self.spf {
            while m > 1 {
                let p = u64::from(spf[m as usize]);
                push(p);
                m /= p;
            }
            return Ok(out);
        }
        for &p in &self.small_primes {
            if p * p > m {
                break;
            }
            while m % p == 0 {
                push(p);
                m /= p;
            }
        }
        if m > 1 {
            push(m);
        }
        Ok(out)
    }

    /// True iff `n` has no prime factor `q` with `2 < q < z`. The prime 2 is exempt.
    pub fn is_z_rough(&self, n: u64, z: f64) -> Result<bool, TableError> {
        self.check("n", n)?;
        let mut m = n;
        while m > 1 && m % 2 == 0 {
            m /= 2;
        }
        if m <= 1 {
            return Ok(true);
        }
        if let Some(spf) = &self.spf {
            return Ok(f64::from(spf[m as usize]) >= z);
        }
        for &p in self.small_primes.iter().skip(1) {
            if (p as f64) >= z {
                return Ok(true);
            }
            if p * p > m {
                break;
            }
            if m % p == 0 {
                return Ok(false);
            }
        }
        // m is 1 or a prime here
        Ok(m == 1 || (m as f64) >= z)
    }

    /// `π(limit)` and counts of `n <= limit` by `Ω(n)`.
    pub fn stats(&self) -> TableStats {
        let mut classes = vec![0u64; 1];
        for &o in &self.omega[1..=self.limit as usize] {
            let o = o as usize;
            if o >= classes.len() {
                classes.resize(o + 1, 0);
            }
            classes[o] += 1;
        }
        TableStats {
            limit: self.limit,
            prime_count: self.prime_count(self.limit).expect("in range"),
            omega_classes: classes,
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), TableError> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&self.limit.to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.bits.len() * 8);
        for word in &self.bits {
            buf.extend_from_slice(&word.to_le_bytes());
        }
        w.write_all(&buf)?;
        w.write_all(&self.omega)?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<PrimeTable, TableError> {
        let mut head = [0u8; 16];
        r.read_exact(&mut head)?;
        if &head[..4] != MAGIC {
            return Err(TableError::Format("missing DIOC magic".into()));
        }
        let version = u32::from_le_bytes(head[4..8].try_into().expect("4 bytes"));
        if version != FORMAT_VERSION {
            return Err(TableError::Format(format!("unsupported version {version}")));
        }
        let limit = u64::from_le_bytes(head[8..16].try_into().expect("8 bytes"));
        if !(MIN_LIMIT..=MAX_LIMIT).contains(&limit) {
            return Err(TableError::Format(format!("limit {limit} out of range")));
        }
        let top = limit + 2;
        let words = (top as usize + 1).div_ceil(64);
        let mut raw = vec![0u8; words * 8];
        r.read_exact(&mut raw)?;
        let bits = raw.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
        let mut omega = vec![0u8; top as usize + 1];
        r.read_exact(&mut omega)?;
        if r.read(&mut [0u8; 1])? != 0 {
            return Err(TableError::Format("trailing bytes".into()));
        }
        Ok(PrimeTable { limit, bits, omega, spf: None, small_primes: simple_sieve(isqrt(top) as usize + 1) })
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct TableStats {
    pub limit: u64,
    pub prime_count: u64,
    /// `omega_classes[k]` = number of `1 <= n <= limit` with `Ω(n) = k`.
    pub omega_classes: Vec<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    fn trial_omega(mut n: u64) -> u32 {
        let mut k = 0;
        let mut d = 2;
        while d * d <= n {
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            d += 1;
        }
        k + u32::from(n > 1)
    }

    #[test]
    fn small_table_examples() {
        let t = build_tables(100).unwrap();
        assert_eq!(t.prime_count(100).unwrap(), 25);
        assert_eq!(t.big_omega(99).unwrap(), 3);
        assert_eq!(t.big_omega(1).unwrap(), 0);
        assert_eq!(t.big_omega(12).unwrap(), 3);
        assert_eq!(t.big_omega(102).unwrap(), 3);
        assert!(t.big_omega(103).is_err());
    }

    #[test]
    fn intervals() {
        let t = build_tables(100).unwrap();
        assert_eq!(t.primes_in(50, 100).unwrap(), vec![53, 59, 61, 67, 71, 73, 79, 83, 89, 97]);
        assert_eq!(t.primes_in(1, 2).unwrap(), vec![2]);
        assert!(t.primes_in(90, 96).unwrap().is_empty());
        assert!(t.primes_in(5, 5).unwrap().is_empty());
        assert!(t.primes_in(0, 200).is_err());
        assert!(t.primes_in(10, 5).is_err());
        assert_eq!(t.primes_in(0, 102).unwrap().last(), Some(&101));
    }

    #[test]
    fn roughness() {
        let t = build_tables(2000).unwrap();
        assert!(!t.is_z_rough(99, 5.0).unwrap());
        assert!(t.is_z_rough(99, 3.0).unwrap());
        assert!(t.is_z_rough(1024, 1e9).unwrap());
        assert!(t.is_z_rough(1, 100.0).unwrap());
        assert!(!t.is_z_rough(2 * 997, 998.0).unwrap());
        assert!(t.is_z_rough(2 * 997, 997.0).unwrap());
        assert!(t.is_z_rough(5000, 3.0).is_err());
    }

    #[test]
    fn agrees_with_trial_division() {
        let t = build_tables(10_000).unwrap();
        for n in 0..=10_002 {
            assert_eq!(t.is_prime(n), trial_prime(n), "n = {n}");
            if n >= 1 {
                assert_eq!(t.big_omega(n).unwrap(), trial_omega(n), "n = {n}");
            }
        }
    }

    #[test]
    fn segment_size_does_not_matter() {
        let reference = PrimeTable::build(100_000, &TableConfig { segment_bytes: 1 << 18, ..Default::default() }).unwrap();
        for seg in [8usize, 64, 1000, 4096] {
            let t = PrimeTable::build(100_000, &TableConfig { segment_bytes: seg, ..Default::default() }).unwrap();
            assert_eq!(t.bits, reference.bits, "segment {seg}");
        }
        // naive sieve oracle
        let naive = simple_sieve(100_002);
        assert_eq!(reference.primes_in(0, 100_002).unwrap(), naive);
    }

    #[test]
    fn spf_and_trial_factorizations_agree() {
        let with = PrimeTable::build(50_000, &TableConfig { with_spf: true, ..Default::default() }).unwrap();
        let without = build_tables(50_000).unwrap();
        for n in 1..=50_002u64 {
            let f = with.factorize(n).unwrap();
            assert_eq!(f, without.factorize(n).unwrap());
            assert_eq!(f.iter().map(|&(_, e)| e).sum::<u32>(), with.big_omega(n).unwrap());
            for z in [3.0, 5.5, 50.0, 300.0] {
                assert_eq!(with.is_z_rough(n, z).unwrap(), without.is_z_rough(n, z).unwrap(), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn omega_counts_primes() {
        let t = build_tables(200_000).unwrap();
        let s = t.stats();
        assert_eq!(s.omega_classes[1], s.prime_count);
        assert_eq!(s.omega_classes.iter().sum::<u64>(), 200_000);
        assert_eq!(s.omega_classes[0], 1);
    }

    #[test]
    fn rough_shifts_have_few_factors() {
        let t = build_tables(100_000).unwrap();
        for z in [5.0f64, 11.0, 30.0] {
            for p in t.primes_in(2, 100_000).unwrap() {
                if t.is_z_rough(p + 2, z).unwrap() {
                    // a power of two can carry many factors of 2
                    let odd_part = t.factorize(p + 2).unwrap().iter().filter(|f| f.0 > 2).map(|f| f.1).sum::<u32>();
                    assert!(f64::from(odd_part) <= ((p + 2) as f64).ln() / z.ln() + 1.0);
                }
            }
        }
    }

    #[test]
    fn budget_errors() {
        assert!(matches!(build_tables(50), Err(TableError::Budget { .. })));
        let cfg = TableConfig { max_limit: 1000, ..Default::default() };
        assert!(matches!(PrimeTable::build(2000, &cfg), Err(TableError::Budget { .. })));
    }

    #[test]
    fn cache_round_trip_and_rejects_garbage() {
        let t = build_tables(12_345).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"DIOC");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), 12_345);
        let back = PrimeTable::read_from(&buf[..]).unwrap();
        assert_eq!(back.bits, t.bits);
        assert_eq!(back.omega, t.omega);

        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(PrimeTable::read_from(&bad[..]), Err(TableError::Format(_))));
        let mut long = buf.clone();
        long.push(0);
        assert!(PrimeTable::read_from(&long[..]).is_err());
        assert!(PrimeTable::read_from(&buf[..buf.len() - 1]).is_err());
    }

    #[test]
    fn pi_of_a_million() {
        let t = build_tables(1_000_000).unwrap();
        assert_eq!(t.prime_count(1_000_000).unwrap(), 78_498);
        assert_eq!(simple_sieve(1_000_000).len(), 78_498);
    }
}
