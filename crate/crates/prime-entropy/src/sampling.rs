//! Seeded Monte Carlo probes of the "independent geometrics" picture.
//!
//! The generator is pinned: ChaCha8 (rand_chacha 0.9.0), keyed by the master
//! seed, with trial i drawing from stream i. Each trial is a pure function of
//! (seed, trial index), so splitting trials across threads merges to exactly
//! the counts a sequential loop produces, and sampled outputs are
//! bit-reproducible across runs and platforms.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::ExponentDistribution;
use crate::kahan::KahanSum;
use crate::primes::is_prime;

/// Cap on the joint-law table for independence probes.
pub const INDEPENDENCE_CELL_BUDGET: u128 = 1_000_000;

/// Largest prime subset an independence probe accepts.
pub const MAX_SUBSET_SIZE: usize = 4;

/// Histogram of observed exponents of one prime across sampled integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalLaw {
    pub p: u64,
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    /// exponent value -> occurrence count; values sum to `trials`.
    pub counts: BTreeMap<u32, u64>,
}

impl EmpiricalLaw {
    /// Observed frequencies as a dense vector over 0..=max observed k.
    pub fn pmf_f64(&self) -> Vec<f64> {
        let max_k = *self.counts.keys().last().unwrap_or(&0);
        let mut pmf = vec![0.0; max_k as usize + 1];
        for (&k, &c) in &self.counts {
            pmf[k as usize] = c as f64 / self.trials as f64;
        }
        pmf
    }
}

/// Uniform draw from [1, n] by rejection from the generator's full 64-bit
/// range; no modulo bias.
#[inline]
fn draw_uniform(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    let accept_below = (u64::MAX / n) * n;
    loop {
        let v = rng.next_u64();
        if v < accept_below {
            return 1 + v % n;
        }
    }
}

#[inline]
fn exponent_of(p: u64, mut m: u64) -> u32 {
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    k
}

fn validate_prime_in_range(p: u64, n: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if p > n {
        return Err(Error::domain(format!("prime {p} exceeds n = {n}")));
    }
    Ok(())
}

/// Sample `trials` uniform integers from [1, n] and histogram the exponent
/// of `p` in each. Reproducible: the result is a function of
/// (n, p, trials, seed) only, independent of thread count.
pub fn sample_exponents(n: u64, p: u64, trials: u64, seed: u64) -> Result<EmpiricalLaw> {
    validate_prime_in_range(p, n)?;
    if trials == 0 {
        return Err(Error::domain("trials must be >= 1"));
    }
    let base = ChaCha8Rng::seed_from_u64(seed);
    let counts = (0..trials)
        .into_par_iter()
        .fold(BTreeMap::<u32, u64>::new, |mut map, trial| {
            let mut rng = base.clone();
            rng.set_stream(trial);
            let value = draw_uniform(&mut rng, n);
            *map.entry(exponent_of(p, value)).or_insert(0) += 1;
            map
        })
        .reduce(BTreeMap::new, |mut left, right| {
            for (k, c) in right {
                *left.entry(k).or_insert(0) += c;
            }
            left
        });
    Ok(EmpiricalLaw {
        p,
        n,
        trials,
        seed,
        counts,
    })
}

/// Total variation distance between two probability vectors, taken over the
/// union of their supports (missing entries count as zero). Both inputs must
/// be nonnegative and sum to 1 within 1e-9.
pub fn tv_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    for (name, v) in [("first", a), ("second", b)] {
        if v.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::domain(format!(
                "{name} sequence has a negative or non-finite entry"
            )));
        }
        let total: f64 = v.iter().copied().collect::<KahanSum>().value();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "{name} sequence sums to {total}, not 1"
            )));
        }
    }
    let mut acc = KahanSum::new();
    for k in 0..a.len().max(b.len()) {
        let x = a.get(k).copied().unwrap_or(0.0);
        let y = b.get(k).copied().unwrap_or(0.0);
        acc.add((x - y).abs());
    }
    Ok(0.5 * acc.value())
}

/// TV distance between the exact law of X_p at width n and its n→∞ limit,
/// the geometric law with tail (1/p)^k. Shrinks like (max exponent)/n.
pub fn geometric_limit_gap(n: u64, p: u64) -> Result<f64> {
    let law = ExponentDistribution::exact(n, p)?;
    let q = 1.0 / p as f64;
    let mut acc = KahanSum::new();
    let mut limit_tail = 1.0;
    for &count in law.pmf_counts() {
        let exact = count as f64 / n as f64;
        let limit_mass = limit_tail * (1.0 - q);
        acc.add((exact - limit_mass).abs());
        limit_tail *= q;
    }
    // Mass the limiting law keeps beyond the exact law's support.
    acc.add(limit_tail);
    Ok(0.5 * acc.value())
}

/// TV distance between the empirical joint law of (X_p : p in `primes`) and
/// the product of the exact marginal laws, over a table of at most
/// [`INDEPENDENCE_CELL_BUDGET`] cells.
pub fn independence_gap(n: u64, primes: &[u64], trials: u64, seed: u64) -> Result<f64> {
    if primes.is_empty() || primes.len() > MAX_SUBSET_SIZE {
        return Err(Error::domain(format!(
            "prime subset must have 1..={MAX_SUBSET_SIZE} elements, got {}",
            primes.len()
        )));
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != primes.len() {
        return Err(Error::domain("prime subset has duplicates"));
    }
    for &p in primes {
        validate_prime_in_range(p, n)?;
    }
    if trials == 0 {
        return Err(Error::domain("trials must be >= 1"));
    }

    let marginals: Vec<Vec<f64>> = primes
        .iter()
        .map(|&p| Ok(ExponentDistribution::exact(n, p)?.pmf_f64()))
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = marginals.iter().map(Vec::len).collect();
    let cells = dims.iter().map(|&d| d as u128).product::<u128>();
    if cells > INDEPENDENCE_CELL_BUDGET {
        return Err(Error::CellBudgetExceeded {
            cells,
            budget: INDEPENDENCE_CELL_BUDGET as u64,
        });
    }
    let cells = cells as usize;

    // Strides for flattening the exponent vector; every observed exponent
    // fits its dimension because p^(K+1) > n cannot divide a value <= n.
    let mut strides = vec![1usize; dims.len()];
    for i in 1..dims.len() {
        strides[i] = strides[i - 1] * dims[i - 1];
    }

    let base = ChaCha8Rng::seed_from_u64(seed);
    let joint = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; cells],
            |mut counts, trial| {
                let mut rng = base.clone();
                rng.set_stream(trial);
                let value = draw_uniform(&mut rng, n);
                let cell: usize = primes
                    .iter()
                    .zip(&strides)
                    .map(|(&p, &stride)| exponent_of(p, value) as usize * stride)
                    .sum();
                counts[cell] += 1;
                counts
            },
        )
        .reduce(
            || vec![0u64; cells],
            |mut left, right| {
                for (l, r) in left.iter_mut().zip(right) {
                    *l += r;
                }
                left
            },
        );

    let mut acc = KahanSum::new();
    for (cell, &count) in joint.iter().enumerate() {
        let mut product = 1.0;
        let mut rest = cell;
        for (marginal, &dim) in marginals.iter().zip(&dims) {
            product *= marginal[rest % dim];
            rest /= dim;
        }
        acc.add((count as f64 / trials as f64 - product).abs());
    }
    Ok(0.5 * acc.value())
}
