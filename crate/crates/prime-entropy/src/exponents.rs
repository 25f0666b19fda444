//! Exact distribution of the prime-factorization exponents of a uniform
//! random integer, and the geometric laws they approximate.
//!
//! For N uniform on {1..n} and a prime p <= n, let X_p be the largest k with
//! p^k | N. Then P{X_p >= k} = floor(n/p^k)/n — an exact rational with
//! denominator n. Everything downstream (probability masses, means, the
//! mean-bound checks) stays in integer arithmetic with denominator n, so the
//! inequality sweeps compare exact fractions; floats appear only once a
//! logarithm is taken.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::primes::{is_prime, PrimeTable};

/// Largest `n` accepted by [`joint_exponent_entropy`]; beyond this the
/// enumeration adds no information and the vector map gets large.
pub const JOINT_ENUMERATION_CAP: u64 = 100_000;

/// An unreduced fraction. Comparisons cross-multiply in 128 bits, so two
/// fractions are compared (and equated) by value, never through floats.
#[derive(Debug, Clone, Copy)]
pub struct Rational {
    pub numerator: u64,
    pub denominator: u64,
}

impl Rational {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator > 0, "zero denominator");
        Rational {
            numerator,
            denominator,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.numerator as u128 * other.denominator as u128
            == other.numerator as u128 * self.denominator as u128
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.numerator as u128 * other.denominator as u128)
            .cmp(&(other.numerator as u128 * self.denominator as u128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Exact law of the exponent X_p of one prime in the factorization of a
/// uniform integer from {1..n}. All probabilities have denominator n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentDistribution {
    n: u64,
    p: u64,
    /// floor(n / p^k) for k = 1..=K, where K is the largest k with p^k <= n.
    tail_counts: Vec<u64>,
    /// Numerators of P{X_p = k} for k = 0..=K; sums to exactly n.
    pmf_counts: Vec<u64>,
}

impl ExponentDistribution {
    /// Build the exact law. `p` must be prime and `2 <= p <= n`.
    pub fn exact(n: u64, p: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("law needs n >= 2, got {n}")));
        }
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if p > n {
            return Err(Error::domain(format!("prime {p} exceeds n = {n}")));
        }
        Ok(Self::for_table_prime(n, p))
    }

    /// Same construction for a `p` already known to be a prime `<= n`.
    pub(crate) fn for_table_prime(n: u64, p: u64) -> Self {
        debug_assert!(n >= 2 && p >= 2 && p <= n);
        let mut tail_counts = Vec::new();
        let mut power = p;
        loop {
            tail_counts.push(n / power);
            // Overflow-checked: once p^(k+1) would pass u64 it certainly
            // passes n, so stopping is correct either way.
            match power.checked_mul(p) {
                Some(next) if next <= n => power = next,
                _ => break,
            }
        }
        let mut pmf_counts = Vec::with_capacity(tail_counts.len() + 1);
        let mut previous = n; // tail at k = 0 is n/n = 1
        for &t in &tail_counts {
            pmf_counts.push(previous - t);
            previous = t;
        }
        pmf_counts.push(previous); // tail beyond the last power is 0
        ExponentDistribution {
            n,
            p,
            tail_counts,
            pmf_counts,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// K: the largest exponent with positive probability.
    pub fn max_exponent(&self) -> u32 {
        self.tail_counts.len() as u32
    }

    /// P{X_p >= k} as an exact fraction; zero beyond `max_exponent`.
    pub fn tail(&self, k: u32) -> Rational {
        let num = match k {
            0 => self.n,
            _ => *self.tail_counts.get(k as usize - 1).unwrap_or(&0),
        };
        Rational::new(num, self.n)
    }

    /// P{X_p = k} as an exact fraction; zero beyond `max_exponent`.
    pub fn pmf(&self, k: u32) -> Rational {
        let num = *self.pmf_counts.get(k as usize).unwrap_or(&0);
        Rational::new(num, self.n)
    }

    /// Numerators of the probability masses for k = 0..=K; they sum to n.
    pub fn pmf_counts(&self) -> &[u64] {
        &self.pmf_counts
    }

    /// The probability masses as floats, for metric computations.
    pub fn pmf_f64(&self) -> Vec<f64> {
        self.pmf_counts
            .iter()
            .map(|&m| m as f64 / self.n as f64)
            .collect()
    }

    /// E[X_p] = Σ_k P{X_p >= k}, exact. Always within
    /// [1/p − 1/n, 1/(p−1)].
    pub fn mean(&self) -> Rational {
        Rational::new(self.tail_counts.iter().sum(), self.n)
    }

    /// Shannon entropy −Σ_k P{X_p = k} ln P{X_p = k} in nats; zero-mass
    /// terms contribute nothing.
    pub fn entropy(&self) -> f64 {
        let n = self.n as f64;
        let mut acc = KahanSum::new();
        for &m in &self.pmf_counts {
            if m > 0 {
                let q = m as f64 / n;
                acc.add(-q * q.ln());
            }
        }
        acc.value()
    }
}

/// Geometric law on {0, 1, 2, ...} with the given mean:
/// P{Y = k} = mean^k / (1 + mean)^(k+1). The maximum-entropy law among
/// nonnegative-integer distributions with that mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometric {
    mean: f64,
}

impl Geometric {
    pub fn new(mean: f64) -> Result<Self> {
        if !mean.is_finite() || mean < 0.0 {
            return Err(Error::domain(format!(
                "geometric law needs a finite mean >= 0, got {mean}"
            )));
        }
        Ok(Geometric { mean })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn pmf(&self, k: u32) -> f64 {
        if self.mean == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        let ratio = self.mean / (1.0 + self.mean);
        ratio.powi(k as i32) / (1.0 + self.mean)
    }

    /// P{Y >= k} = (mean / (1 + mean))^k.
    pub fn tail(&self, k: u32) -> f64 {
        if self.mean == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        (self.mean / (1.0 + self.mean)).powi(k as i32)
    }

    pub fn entropy(&self) -> f64 {
        geometric_entropy(self.mean).expect("mean validated at construction")
    }
}

/// Entropy of the geometric law with the given mean, in nats:
/// (mu + 1) ln(mu + 1) − mu ln mu, with the continuity convention h(0) = 0.
/// Strictly increasing in mu on (0, ∞).
pub fn geometric_entropy(mu: f64) -> Result<f64> {
    if !mu.is_finite() || mu < 0.0 {
        return Err(Error::domain(format!(
            "geometric entropy needs mu >= 0, got {mu}"
        )));
    }
    if mu == 0.0 {
        return Ok(0.0);
    }
    Ok((mu + 1.0) * mu.ln_1p() - mu * mu.ln())
}

/// Exact exponent laws for every prime `p <= n`, in increasing order of p.
pub fn exponent_laws<'a>(
    n: u64,
    table: &'a PrimeTable,
) -> Result<impl Iterator<Item = ExponentDistribution> + 'a> {
    if n < 2 || n > table.limit() {
        return Err(Error::OutOfRange {
            n,
            limit: table.limit(),
        });
    }
    Ok(table
        .primes_upto(n)
        .iter()
        .map(move |&p| ExponentDistribution::for_table_prime(n, p)))
}

/// Σ_{p<=n} H(X_p): the marginal entropy sum, always >= ln n.
pub fn marginal_entropy_sum(n: u64, table: &PrimeTable) -> Result<f64> {
    let mut acc = KahanSum::new();
    for law in exponent_laws(n, table)? {
        acc.add(law.entropy());
    }
    Ok(acc.value())
}

/// E[ln N] = Σ_{p<=n} E[X_p] ln p for N uniform on {1..n}, using the exact
/// rational means. Always <= ln n, and equal to ln(n!)/n.
pub fn mean_log_sum(n: u64, table: &PrimeTable) -> Result<f64> {
    if n < 2 || n > table.limit() {
        return Err(Error::OutOfRange {
            n,
            limit: table.limit(),
        });
    }
    let mut acc = KahanSum::new();
    for law in exponent_laws(n, table)? {
        let weight = law.mean().numerator as f64;
        acc.add(weight * (law.prime() as f64).ln());
    }
    Ok(acc.value() / n as f64)
}

/// Entropy of the joint law of all exponents (X_p : p <= n), computed the
/// hard way: factorize every N in {1..n}, bucket the exponent vectors, take
/// the entropy of the resulting probability masses. Unique factorization
/// makes every vector distinct, so the value is ln n up to float error —
/// which is exactly what callers verify.
pub fn joint_exponent_entropy(n: u64, table: &PrimeTable) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("joint law needs n >= 2, got {n}")));
    }
    if n > JOINT_ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            requested: n,
            cap: JOINT_ENUMERATION_CAP,
        });
    }
    if n > table.limit() {
        return Err(Error::OutOfRange {
            n,
            limit: table.limit(),
        });
    }
    let primes = table.primes_upto(n.isqrt());
    let mut buckets: HashMap<Vec<(u64, u8)>, u64> = HashMap::new();
    for value in 1..=n {
        *buckets.entry(factorize_with(value, primes)).or_insert(0) += 1;
    }
    let nf = n as f64;
    let mut acc = KahanSum::new();
    for &count in buckets.values() {
        let q = count as f64 / nf;
        acc.add(-q * q.ln());
    }
    Ok(acc.value())
}

/// Factorization as (prime, exponent) pairs in increasing prime order,
/// using trial division by the supplied primes (which must cover sqrt(m)).
pub(crate) fn factorize_with(mut m: u64, primes: &[u64]) -> Vec<(u64, u8)> {
    let mut factors = Vec::new();
    for &p in primes {
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0u8;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        factors.push((m, 1));
    }
    factors
}

/// Standalone factorization by a 6k±1 wheel; no table needed.
fn factorize_u64(mut m: u64) -> Vec<(u64, u8)> {
    let mut factors = Vec::new();
    let mut strip = |d: u64, m: &mut u64| {
        if (*m).is_multiple_of(d) {
            let mut e = 0u8;
            while (*m).is_multiple_of(d) {
                *m /= d;
                e += 1;
            }
            factors.push((d, e));
        }
    };
    strip(2, &mut m);
    strip(3, &mut m);
    let mut d = 5u64;
    while d.saturating_mul(d) <= m {
        strip(d, &mut m);
        strip(d + 2, &mut m);
        d += 6;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    factors
}

/// value = root^2 · Π odd_primes, with the square-free product over
/// `odd_primes` and `root` maximal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareFreeDecomposition {
    /// Largest integer whose square divides the value.
    pub root: u64,
    /// Primes appearing with odd exponent, increasing.
    pub odd_primes: Vec<u64>,
}

impl SquareFreeDecomposition {
    /// Product of the odd-exponent primes.
    pub fn square_free_part(&self) -> u64 {
        self.odd_primes.iter().product()
    }

    /// root^2 · square-free part; reproduces the decomposed value.
    pub fn recompose(&self) -> u64 {
        self.root * self.root * self.square_free_part()
    }
}

/// Split `value >= 1` as m^2 times a square-free part, with m maximal.
pub fn squarefree_decompose(value: u64) -> Result<SquareFreeDecomposition> {
    if value == 0 {
        return Err(Error::domain("squarefree decomposition needs value >= 1"));
    }
    let mut root = 1u64;
    let mut odd_primes = Vec::new();
    for (p, e) in factorize_u64(value) {
        root *= p.pow(u32::from(e) / 2);
        if e % 2 == 1 {
            odd_primes.push(p);
        }
    }
    Ok(SquareFreeDecomposition { root, odd_primes })
}
