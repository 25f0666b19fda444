//! Point evaluation of the prime sums and identities built from them.
//!
//! `mertens_sum` is C(n) = Σ_{p<=n} (ln p)/p, the crate's central quantity.
//! `entropy_majorant` is T(n) = Σ_{p<=n} [ln p/(p−1) − ln(1 − 1/p)], the
//! closed-form upper envelope of the marginal entropy sum; it dominates both
//! ln n and C(n) term by term. `prime_count_by_parts` reconstructs pi(n) from
//! the running values of C alone via Abel summation, which the sweep suite
//! checks against the sieve count.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::ledger::majorant_term;
use crate::primes::PrimeTable;

/// C(n) = Σ_{p<=n} (ln p)/p in nats. C(1) = 0 by definition.
pub fn mertens_sum(n: u64, table: &PrimeTable) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("mertens_sum needs n >= 1"));
    }
    if n > table.limit() {
        return Err(Error::OutOfRange {
            n,
            limit: table.limit(),
        });
    }
    if n == 1 {
        return Ok(0.0);
    }
    let mut acc = KahanSum::new();
    for &p in table.primes_upto(n) {
        acc.add((p as f64).ln() / p as f64);
    }
    Ok(acc.value())
}

/// T(n) = Σ_{p<=n} [ln p/(p−1) − ln(1 − 1/p)] in nats, for n >= 2.
pub fn entropy_majorant(n: u64, table: &PrimeTable) -> Result<f64> {
    if n < 2 || n > table.limit() {
        return Err(Error::OutOfRange {
            n,
            limit: table.limit(),
        });
    }
    let mut acc = KahanSum::new();
    for &p in table.primes_upto(n) {
        acc.add(majorant_term(p));
    }
    Ok(acc.value())
}

#[inline]
fn weight(x: f64) -> f64 {
    x / x.ln()
}

/// Reconstruct pi(n) from the running Mertens sums by Abel summation:
///
/// pi(n) = (n+1)/ln(n+1) · C(n) − Σ_{k=2}^{n} [ (k+1)/ln(k+1) − k/ln k ] · C(k)
///
/// Exact in exact arithmetic for n >= 3; the float result is close enough to
/// round to pi(n). One forward pass, O(n) time, O(1) extra space. The caller
/// rounds and compares.
pub fn prime_count_by_parts(n: u64, table: &PrimeTable) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(format!(
            "the reconstruction is stated for n >= 3, got {n}"
        )));
    }
    if n > table.limit() {
        return Err(Error::OutOfRange {
            n,
            limit: table.limit(),
        });
    }
    let mut primes = table.primes().iter().copied().peekable();
    let mut mertens = KahanSum::new();
    let mut correction = KahanSum::new();
    for k in 2..=n {
        if primes.peek() == Some(&k) {
            mertens.add((k as f64).ln() / k as f64);
            primes.next();
        }
        let step = weight(k as f64 + 1.0) - weight(k as f64);
        correction.add(step * mertens.value());
    }
    Ok(weight(n as f64 + 1.0) * mertens.value() - correction.value())
}

/// An affine-in-`ln n` lower bound for the Mertens sum, anchored at `n0`:
///
/// C(n) >= slope · ln n + offset  for all n >= n0,
///
/// with slope = (1 − 1/n0)(1 − 1/(1 + ln n0)) and offset = C(n0) − T(n0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertensLowerBound {
    pub anchor: u64,
    pub slope: f64,
    pub offset: f64,
}

impl MertensLowerBound {
    /// Compute the bound coefficients at anchor `n0 >= 2` from the table.
    pub fn anchored_at(n0: u64, table: &PrimeTable) -> Result<Self> {
        if n0 < 2 {
            return Err(Error::domain(format!("anchor must be >= 2, got {n0}")));
        }
        let c0 = mertens_sum(n0, table)?;
        let t0 = entropy_majorant(n0, table)?;
        let n0f = n0 as f64;
        let slope = (1.0 - 1.0 / n0f) * (1.0 - 1.0 / (1.0 + n0f.ln()));
        Ok(MertensLowerBound {
            anchor: n0,
            slope,
            offset: c0 - t0,
        })
    }

    /// Evaluate the certified lower bound at `n >= anchor`.
    pub fn evaluate(&self, n: u64) -> Result<f64> {
        if n < self.anchor {
            return Err(Error::domain(format!(
                "bound anchored at {} does not apply to n = {n}",
                self.anchor
            )));
        }
        Ok(self.slope * (n as f64).ln() + self.offset)
    }
}
