//! Streaming per-`n` snapshots of the four running prime sums.
//!
//! A [`SumLedger`] records, at a given `n`: `prime_count` = pi(n),
//! `theta` = Σ ln p, `mertens` = Σ (ln p)/p, and `entropy_majorant` =
//! Σ [ln p/(p−1) − ln(1 − 1/p)], all over primes `p <= n`, in nats. The whole
//! range 2..=n_max streams in one pass with constant memory beyond the sieve
//! segment, which is what makes million-scale sweeps cheap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::primes::{PrimeTable, SegmentedSieve};

/// Snapshot of the running prime sums at one value of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumLedger {
    pub n: u64,
    /// pi(n)
    pub prime_count: u64,
    /// Σ_{p<=n} ln p
    pub theta: f64,
    /// Σ_{p<=n} (ln p)/p
    pub mertens: f64,
    /// Σ_{p<=n} [ln p/(p−1) − ln(1 − 1/p)]
    pub entropy_majorant: f64,
}

/// The per-prime term of the `entropy_majorant` sum.
///
/// Grouped as ln(p)/(p−1) + ln(1 + 1/(p−1)) so no cancellation occurs for
/// large p, where ln(1 − 1/p) evaluated directly loses digits.
#[inline]
pub(crate) fn majorant_term(p: u64) -> f64 {
    let pm1 = (p - 1) as f64;
    (p as f64).ln() / pm1 + (1.0 / pm1).ln_1p()
}

/// Running accumulator used by both ledger streams and the sweep engine.
/// `advance_to(n)` folds in every prime in `(current, n]` from the supplied
/// prime iterator, which must yield primes in increasing order.
#[derive(Debug, Clone)]
pub(crate) struct LedgerAccumulator<I> {
    primes: I,
    pending: Option<u64>,
    pub n: u64,
    pub prime_count: u64,
    pub theta: KahanSum,
    pub mertens: KahanSum,
    pub entropy_majorant: KahanSum,
}

impl<I: Iterator<Item = u64>> LedgerAccumulator<I> {
    pub fn new(mut primes: I) -> Self {
        let pending = primes.next();
        LedgerAccumulator {
            primes,
            pending,
            n: 1,
            prime_count: 0,
            theta: KahanSum::new(),
            mertens: KahanSum::new(),
            entropy_majorant: KahanSum::new(),
        }
    }

    #[inline]
    pub fn advance_to(&mut self, n: u64) {
        debug_assert!(n >= self.n);
        while let Some(p) = self.pending {
            if p > n {
                break;
            }
            let log_p = (p as f64).ln();
            self.theta.add(log_p);
            self.mertens.add(log_p / p as f64);
            self.entropy_majorant.add(majorant_term(p));
            self.prime_count += 1;
            self.pending = self.primes.next();
        }
        self.n = n;
    }

    pub fn snapshot(&self) -> SumLedger {
        SumLedger {
            n: self.n,
            prime_count: self.prime_count,
            theta: self.theta.value(),
            mertens: self.mertens.value(),
            entropy_majorant: self.entropy_majorant.value(),
        }
    }
}

/// Iterator of [`SumLedger`] snapshots for n = 2..=n_max.
pub struct Ledgers<I> {
    acc: LedgerAccumulator<I>,
    next_n: u64,
    n_max: u64,
}

impl<I: Iterator<Item = u64>> Iterator for Ledgers<I> {
    type Item = SumLedger;

    fn next(&mut self) -> Option<SumLedger> {
        if self.next_n > self.n_max {
            return None;
        }
        self.acc.advance_to(self.next_n);
        self.next_n += 1;
        Some(self.acc.snapshot())
    }
}

/// Stream one ledger per n for n = 2..=n_max, sieving on the fly.
///
/// Memory stays constant beyond the sieve segment, so n_max = 10^8 is fine.
pub fn stream_ledgers(n_max: u64) -> Result<Ledgers<SegmentedSieve>> {
    if n_max < 2 {
        return Err(Error::domain(format!(
            "ledger stream needs n_max >= 2, got {n_max}"
        )));
    }
    Ok(Ledgers {
        acc: LedgerAccumulator::new(SegmentedSieve::new(n_max)),
        next_n: 2,
        n_max,
    })
}

impl PrimeTable {
    /// Ledger stream backed by this table's prime list.
    pub fn ledgers(
        &self,
        n_max: u64,
    ) -> Result<Ledgers<std::iter::Copied<std::slice::Iter<'_, u64>>>> {
        if n_max < 2 || n_max > self.limit() {
            return Err(Error::OutOfRange {
                n: n_max,
                limit: self.limit(),
            });
        }
        Ok(Ledgers {
            acc: LedgerAccumulator::new(self.primes().iter().copied()),
            next_n: 2,
            n_max,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_ledgers() {
        let rows: Vec<SumLedger> = stream_ledgers(3).unwrap().collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].n, 2);
        assert_eq!(rows[0].prime_count, 1);
        assert_eq!(rows[1].n, 3);
        assert_eq!(rows[1].prime_count, 2);
        assert!((rows[0].theta - 2f64.ln()).abs() < 1e-15);
        assert!((rows[0].mertens - 2f64.ln() / 2.0).abs() < 1e-15);
        assert!((rows[0].entropy_majorant - 2.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn ledger_at_10() {
        let row = stream_ledgers(10).unwrap().last().unwrap();
        assert_eq!(row.prime_count, 4);
        assert!((row.mertens - 1.312652433140255).abs() < 1e-12);
        assert!((row.entropy_majorant - 3.4450376809879883).abs() < 1e-12);
        assert!((row.theta - 210f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_n_max_below_2() {
        assert!(stream_ledgers(1).is_err());
        assert!(stream_ledgers(0).is_err());
    }

    #[test]
    fn table_backed_stream_matches_sieving_stream() {
        let table = PrimeTable::sieve(5_000).unwrap();
        for (a, b) in stream_ledgers(5_000)
            .unwrap()
            .zip(table.ledgers(5_000).unwrap())
        {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn monotone_in_n() {
        let mut prev = SumLedger {
            n: 1,
            prime_count: 0,
            theta: 0.0,
            mertens: 0.0,
            entropy_majorant: 0.0,
        };
        for row in stream_ledgers(2_000).unwrap() {
            assert!(row.prime_count >= prev.prime_count);
            assert!(row.theta >= prev.theta);
            assert!(row.mertens >= prev.mertens);
            assert!(row.entropy_majorant >= prev.entropy_majorant);
            prev = row;
        }
    }

    #[test]
    fn ledger_matches_reverse_order_recomputation() {
        // Summation-order independence: a naive reverse-order sum must agree
        // to 1e-10 relative with the streaming compensated sums.
        let table = PrimeTable::sieve(50_000).unwrap();
        for row in table.ledgers(50_000).unwrap().step_by(9_973) {
            let ps = table.primes_upto(row.n);
            let theta: f64 = ps.iter().rev().map(|&p| (p as f64).ln()).sum();
            let mertens: f64 = ps.iter().rev().map(|&p| (p as f64).ln() / p as f64).sum();
            let majorant: f64 = ps.iter().rev().map(|&p| majorant_term(p)).sum();
            assert!((row.theta - theta).abs() <= 1e-10 * theta.max(1.0));
            assert!((row.mertens - mertens).abs() <= 1e-10 * mertens.max(1.0));
            assert!((row.entropy_majorant - majorant).abs() <= 1e-10 * majorant.max(1.0));
            assert_eq!(row.prime_count as usize, ps.len());
        }
    }
}
