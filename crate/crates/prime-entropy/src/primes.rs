//! Prime generation and the immutable [`PrimeTable`].
//!
//! The sieve is segmented: base primes up to `sqrt(limit)` come from a plain
//! sieve, then fixed-size windows are marked one at a time, so working memory
//! is independent of `limit`. Only the output (the prime list plus its
//! cumulative `theta` ledger) grows with the limit, and a memory budget guards
//! that allocation up front.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Default sieve window: 2^20 entries, ~1 MiB of marks per segment.
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 20;

/// Default budget for the prime list and theta ledger (256 MiB). A limit of
/// 10^8 needs roughly 110 MB and fits; raise the budget explicitly for more.
pub const DEFAULT_MEMORY_BUDGET: usize = 256 << 20;

const CACHE_MAGIC: &str = "PRIMECACHE v1";

/// Deterministic primality check by trial division (2, 3, then a 6k±1 wheel).
///
/// Intended for the 64-bit operands this crate works with; cost grows with
/// `sqrt(n)`, which is fine up to the ~10^8 table limits used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut m = i * i;
            while m <= n {
                composite[m] = true;
                m += i;
            }
        }
    }
    primes
}

/// Streaming iterator over all primes `<= limit`, in increasing order.
///
/// Working memory is one window of `segment_len` marks plus the base primes
/// up to `sqrt(limit)`, regardless of `limit`.
pub struct SegmentedSieve {
    limit: u64,
    segment_len: usize,
    base: Vec<u64>,
    base_pos: usize,
    window: Vec<bool>,
    window_start: u64,
    cursor: usize,
}

impl SegmentedSieve {
    pub fn new(limit: u64) -> Self {
        Self::with_segment_len(limit, DEFAULT_SEGMENT_LEN)
    }

    pub fn with_segment_len(limit: u64, segment_len: usize) -> Self {
        assert!(segment_len > 0, "segment length must be positive");
        let root = limit.isqrt();
        let base = simple_sieve(root);
        SegmentedSieve {
            limit,
            segment_len,
            base,
            base_pos: 0,
            window: Vec::new(),
            window_start: root + 1,
            cursor: 0,
        }
    }

    fn fill_window(&mut self) {
        let lo = self.window_start;
        let hi = (lo + self.segment_len as u64 - 1).min(self.limit);
        let len = (hi - lo + 1) as usize;
        self.window.clear();
        self.window.resize(len, false);
        for &p in &self.base {
            // First multiple of p inside the window; p*p is below lo here
            // because the window starts above sqrt(limit).
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                self.window[(m - lo) as usize] = true;
                m += p;
            }
        }
        self.cursor = 0;
    }
}

impl Iterator for SegmentedSieve {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.base_pos < self.base.len() {
            let p = self.base[self.base_pos];
            self.base_pos += 1;
            return Some(p);
        }
        loop {
            if self.window_start > self.limit {
                return None;
            }
            if self.window.is_empty() {
                self.fill_window();
            }
            while self.cursor < self.window.len() {
                let i = self.cursor;
                self.cursor += 1;
                if !self.window[i] {
                    return Some(self.window_start + i as u64);
                }
            }
            self.window_start += self.window.len() as u64;
            self.window.clear();
        }
    }
}

/// Immutable, ordered list of all primes up to a limit, with a cumulative
/// `theta` ledger (`theta_ledger[i]` = sum of `ln p` over the first `i + 1`
/// primes, compensated summation). Safe to share across threads.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    theta_ledger: Vec<f64>,
}

impl PrimeTable {
    /// Sieve all primes up to `limit` under the default memory budget.
    pub fn sieve(limit: u64) -> Result<Self> {
        Self::sieve_with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    /// Sieve with an explicit budget (bytes) for the prime list + ledger.
    pub fn sieve_with_budget(limit: u64, budget: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::domain(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        let needed = Self::estimated_bytes(limit);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                limit,
                needed,
                budget,
            });
        }
        let mut primes = Vec::new();
        let mut theta_ledger = Vec::new();
        let mut theta = KahanSum::new();
        for p in SegmentedSieve::new(limit) {
            theta.add((p as f64).ln());
            primes.push(p);
            theta_ledger.push(theta.value());
        }
        Ok(PrimeTable {
            limit,
            primes,
            theta_ledger,
        })
    }

    /// Upper estimate of prime-list + ledger storage for a given limit.
    fn estimated_bytes(limit: u64) -> usize {
        // pi(n) < 1.26 n / ln n for n >= 17; 16 bytes per prime (u64 + f64).
        let count = if limit < 17 {
            8.0
        } else {
            1.26 * limit as f64 / (limit as f64).ln()
        };
        (count * 16.0) as usize
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Number of primes in the table, i.e. pi(limit).
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// All primes `<= n`. Panics if `n` exceeds the table limit.
    pub fn primes_upto(&self, n: u64) -> &[u64] {
        assert!(n <= self.limit, "n = {n} beyond table limit {}", self.limit);
        &self.primes[..self.rank(n)]
    }

    /// Number of primes `<= n` (index of the first prime above `n`).
    fn rank(&self, n: u64) -> usize {
        self.primes.partition_point(|&p| p <= n)
    }

    fn check_range(&self, n: u64) -> Result<()> {
        if n < 2 || n > self.limit {
            return Err(Error::OutOfRange {
                n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// pi(n): the number of primes not exceeding `n`.
    pub fn prime_count(&self, n: u64) -> Result<u64> {
        self.check_range(n)?;
        Ok(self.rank(n) as u64)
    }

    /// theta(n) = sum of `ln p` over primes `p <= n`, in nats.
    pub fn theta(&self, n: u64) -> Result<f64> {
        self.check_range(n)?;
        Ok(match self.rank(n) {
            0 => 0.0,
            r => self.theta_ledger[r - 1],
        })
    }

    /// Write the table to a cache file:
    /// `PRIMECACHE v1 limit=<int> count=<int>` then one prime per line.
    pub fn write_cache(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path.as_ref())?);
        writeln!(
            out,
            "{CACHE_MAGIC} limit={} count={}",
            self.limit,
            self.primes.len()
        )?;
        for &p in &self.primes {
            writeln!(out, "{p}")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Load a table from a cache file, validating the declared count, the
    /// ordering, and that the last prime does not exceed the declared limit.
    pub fn from_cache(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let cache_err = |reason: String| Error::Cache {
            path: path.display().to_string(),
            reason,
        };
        let mut lines = BufReader::new(File::open(path)?).lines();
        let header = lines
            .next()
            .ok_or_else(|| cache_err("empty file".into()))??;
        let rest = header
            .strip_prefix(CACHE_MAGIC)
            .filter(|r| r.is_empty() || r.starts_with(' '))
            .ok_or_else(|| cache_err(format!("bad magic in header {header:?}")))?;
        let mut limit = None;
        let mut count = None;
        for field in rest.split_whitespace() {
            if let Some(v) = field.strip_prefix("limit=") {
                limit = v.parse::<u64>().ok();
            } else if let Some(v) = field.strip_prefix("count=") {
                count = v.parse::<usize>().ok();
            }
        }
        let limit = limit.ok_or_else(|| cache_err("missing or invalid limit field".into()))?;
        let count = count.ok_or_else(|| cache_err("missing or invalid count field".into()))?;

        let mut primes = Vec::with_capacity(count);
        let mut theta_ledger = Vec::with_capacity(count);
        let mut theta = KahanSum::new();
        let mut last = 0u64;
        for line in lines {
            let line = line?;
            let p: u64 = line
                .parse()
                .map_err(|_| cache_err(format!("bad prime line {line:?}")))?;
            if p <= last {
                return Err(cache_err(format!("primes not strictly increasing at {p}")));
            }
            last = p;
            theta.add((p as f64).ln());
            primes.push(p);
            theta_ledger.push(theta.value());
        }
        if primes.len() != count {
            return Err(cache_err(format!(
                "header declares {count} primes, file has {}",
                primes.len()
            )));
        }
        if last > limit {
            return Err(cache_err(format!(
                "last prime {last} exceeds limit {limit}"
            )));
        }
        Ok(PrimeTable {
            limit,
            primes,
            theta_ledger,
        })
    }

    /// Reuse a cache file when it matches `limit` exactly; otherwise sieve
    /// and rewrite it.
    pub fn load_or_sieve(limit: u64, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if path.exists() {
            if let Ok(table) = Self::from_cache(path) {
                if table.limit == limit {
                    return Ok(table);
                }
            }
        }
        let table = Self::sieve(limit)?;
        table.write_cache(path)?;
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_limit_10() {
        let t = PrimeTable::sieve(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
    }

    #[test]
    fn sieve_limit_2() {
        let t = PrimeTable::sieve(2).unwrap();
        assert_eq!(t.primes(), &[2]);
    }

    #[test]
    fn sieve_limit_100_matches_trial_division() {
        let t = PrimeTable::sieve(100).unwrap();
        let oracle: Vec<u64> = (2..=100).filter(|&n| trial_division(n)).collect();
        assert_eq!(t.primes(), oracle.as_slice());
        assert_eq!(t.len(), 25);
        assert_eq!(*t.primes().last().unwrap(), 97);
    }

    #[test]
    fn sieve_rejects_limit_below_2() {
        assert!(matches!(PrimeTable::sieve(1), Err(Error::Domain(_))));
    }

    #[test]
    fn sieve_rejects_budget_overflow() {
        let err = PrimeTable::sieve_with_budget(100_000_000, 1 << 20).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn segment_boundaries_do_not_lose_primes() {
        // A tiny segment forces many windows; output must not depend on it.
        let with_default = PrimeTable::sieve(10_000).unwrap();
        let tiny: Vec<u64> = SegmentedSieve::with_segment_len(10_000, 7).collect();
        assert_eq!(with_default.primes(), tiny.as_slice());
    }

    #[test]
    fn prime_count_examples() {
        let t = PrimeTable::sieve(100).unwrap();
        assert_eq!(t.prime_count(2).unwrap(), 1);
        assert_eq!(t.prime_count(3).unwrap(), 2);
        assert_eq!(t.prime_count(100).unwrap(), 25);
        assert!(matches!(t.prime_count(101), Err(Error::OutOfRange { .. })));
        assert!(matches!(t.prime_count(1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn theta_examples() {
        let t = PrimeTable::sieve(100).unwrap();
        assert!((t.theta(2).unwrap() - 2f64.ln()).abs() < 1e-15);
        // theta(10) = ln(2*3*5*7) = ln 210
        assert!((t.theta(10).unwrap() - 210f64.ln()).abs() < 1e-12);
        // Sum of ln p over the 25 primes up to 100.
        assert!((t.theta(100).unwrap() - 83.72839039906393).abs() < 1e-10);
    }

    #[test]
    fn theta_flat_between_primes() {
        let t = PrimeTable::sieve(500).unwrap();
        for n in 2..=250u64 {
            // No even primes beyond 2: theta(2n) == theta(2n - 1), bit-exact.
            assert_eq!(t.theta(2 * n).unwrap(), t.theta(2 * n - 1).unwrap());
        }
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("primes.cache");
        let t = PrimeTable::sieve(1000).unwrap();
        t.write_cache(&path).unwrap();
        let loaded = PrimeTable::from_cache(&path).unwrap();
        assert_eq!(loaded.limit(), 1000);
        assert_eq!(loaded.primes(), t.primes());
        assert_eq!(loaded.theta(1000).unwrap(), t.theta(1000).unwrap());
    }

    #[test]
    fn cache_rejects_count_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.cache");
        std::fs::write(&path, "PRIMECACHE v1 limit=10 count=3\n2\n3\n").unwrap();
        assert!(matches!(
            PrimeTable::from_cache(&path),
            Err(Error::Cache { .. })
        ));
    }

    #[test]
    fn cache_rejects_mangled_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.cache");
        std::fs::write(&path, "PRIMECACHE v1x limit=10 count=1\n2\n").unwrap();
        assert!(matches!(
            PrimeTable::from_cache(&path),
            Err(Error::Cache { .. })
        ));
    }

    #[test]
    fn cache_rejects_prime_beyond_limit() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.cache");
        std::fs::write(&path, "PRIMECACHE v1 limit=10 count=5\n2\n3\n5\n7\n11\n").unwrap();
        assert!(matches!(
            PrimeTable::from_cache(&path),
            Err(Error::Cache { .. })
        ));
    }

    #[test]
    fn load_or_sieve_rewrites_on_limit_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("primes.cache");
        PrimeTable::load_or_sieve(100, &path).unwrap();
        let again = PrimeTable::load_or_sieve(200, &path).unwrap();
        assert_eq!(again.limit(), 200);
        let reloaded = PrimeTable::from_cache(&path).unwrap();
        assert_eq!(reloaded.limit(), 200);
        assert_eq!(reloaded.len(), 46); // pi(200)
    }

    #[test]
    #[ignore = "takes a few seconds; run with --ignored for the full check"]
    fn sieve_to_1e8_inside_default_budget() {
        let t = PrimeTable::sieve(100_000_000).unwrap();
        assert_eq!(t.len(), 5_761_455);
        // theta(1e8) is close to 1e8 and must be finite and monotone-capped.
        let theta = t.theta(100_000_000).unwrap();
        assert!(theta > 9.9e7 && theta < 1.0e8);
    }

    #[test]
    fn is_prime_agrees_with_sieve() {
        let t = PrimeTable::sieve(2000).unwrap();
        let mut iter = t.primes().iter().copied();
        let mut next = iter.next();
        for n in 0..=2000u64 {
            let expected = next == Some(n);
            assert_eq!(is_prime(n), expected, "disagreement at {n}");
            if expected {
                next = iter.next();
            }
        }
    }

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
    }
}
