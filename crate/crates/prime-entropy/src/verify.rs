//! Range sweeps that check every supported inequality or identity at every
//! integer in a range and report the worst margin.
//!
//! Sweeps are streaming: one pass over the range with running prime sums,
//! never a per-n recomputation. Long ranges split into fixed-size blocks that
//! scan in parallel; each block resumes from a checkpointed accumulator state
//! (compensation term included), so the reported margins are bit-identical to
//! a sequential pass no matter how many threads run.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::factorize_with;
use crate::kahan::KahanSum;
use crate::ledger::{majorant_term, SumLedger};
use crate::primes::PrimeTable;
use crate::sums::{mertens_sum, MertensLowerBound};

/// A margin this close to zero (relative to the operand scale) is rounding
/// noise, not a counterexample: the swept statements are exact.
pub const NOISE_FLOOR: f64 = 1e-9;

/// Absolute tolerance per unit of pi(n) for the summation-by-parts identity;
/// its alternating accumulation grows error linearly in n.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-6;

/// Fixed block length for parallel sweeps. Partitioning depends only on the
/// range, never on the thread count, so reports are deterministic.
const BLOCK_LEN: u64 = 1 << 18;

/// The registered bounds and identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundId {
    /// T(n) >= ln n for all n >= 2.
    #[serde(rename = "theorem2")]
    Theorem2,
    /// C(n) <= ln n + 2 ln 2 for all n >= 2.
    #[serde(rename = "theorem3")]
    Theorem3,
    /// C(n) >= (86/125) ln n − 2.35 for all n >= 16.
    #[serde(rename = "corollary1ii")]
    Corollary1ii,
    /// C(n) >= slope(n0) ln n + offset(n0) for all n >= n0.
    #[serde(rename = "genlb")]
    GenLowerBound,
    /// theta(n) <= (2 ln 2) n for all n >= 2.
    #[serde(rename = "erdos_theta")]
    ErdosTheta,
    /// theta(2n+1) − theta(n+1) <= (2 ln 2) n for all n >= 2.
    #[serde(rename = "erdos_step")]
    ErdosStep,
    /// pi(n) >= ln n / (ln ln n + 1) for all n >= 3.
    #[serde(rename = "chaitin_pi")]
    ChaitinPi,
    /// pi(n) >= ln n / (2 ln 2) for all n >= 2.
    #[serde(rename = "squarefree_pi")]
    SquarefreePi,
    /// Σ_{p<=n} E[X_p] ln p <= ln n for all n >= 2.
    #[serde(rename = "ub1_chain")]
    Ub1Chain,
    /// |pi-reconstruction(n) − pi(n)| <= 1e-6 pi(n) for all n >= 3.
    #[serde(rename = "sumbp_identity")]
    SumbpIdentity,
    /// ln n >= T(n): deliberately false, registered so failure paths and the
    /// exit-code contract can be exercised end to end.
    #[serde(rename = "reversed_theorem2")]
    ReversedTheorem2,
}

impl BoundId {
    /// Every bound that states a true theorem or identity.
    pub const STANDARD: [BoundId; 10] = [
        BoundId::Theorem2,
        BoundId::Theorem3,
        BoundId::Corollary1ii,
        BoundId::GenLowerBound,
        BoundId::ErdosTheta,
        BoundId::ErdosStep,
        BoundId::ChaitinPi,
        BoundId::SquarefreePi,
        BoundId::Ub1Chain,
        BoundId::SumbpIdentity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Theorem2 => "theorem2",
            BoundId::Theorem3 => "theorem3",
            BoundId::Corollary1ii => "corollary1ii",
            BoundId::GenLowerBound => "genlb",
            BoundId::ErdosTheta => "erdos_theta",
            BoundId::ErdosStep => "erdos_step",
            BoundId::ChaitinPi => "chaitin_pi",
            BoundId::SquarefreePi => "squarefree_pi",
            BoundId::Ub1Chain => "ub1_chain",
            BoundId::SumbpIdentity => "sumbp_identity",
            BoundId::ReversedTheorem2 => "reversed_theorem2",
        }
    }

    /// Smallest n for which the statement is made.
    pub fn min_n(self, anchor: u64) -> u64 {
        match self {
            BoundId::ChaitinPi | BoundId::SumbpIdentity => 3,
            BoundId::Corollary1ii => 16,
            BoundId::GenLowerBound => anchor,
            _ => 2,
        }
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::STANDARD
            .iter()
            .copied()
            .chain(std::iter::once(BoundId::ReversedTheorem2))
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown bound id {s:?}")))
    }
}

impl std::fmt::Display for BoundId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated point of a sweep: the two sides, margin = lhs − rhs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
}

impl TracePoint {
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Outcome of sweeping one bound over [n_lo, n_hi].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub n_lo: u64,
    pub n_hi: u64,
    /// True iff the worst margin is nonnegative.
    pub holds: bool,
    /// True iff the worst margin is negative but within rounding noise of
    /// zero (see [`NOISE_FLOOR`]); such a sweep is not counted as a definite
    /// counterexample.
    pub indeterminate: bool,
    pub min_margin: f64,
    pub argmin_n: u64,
    /// Periodic (n, lhs, rhs) samples when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<TracePoint>>,
}

/// A point on the convergence trace of C(n)/ln n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioPoint {
    pub n: u64,
    pub mertens: f64,
    pub ratio: f64,
}

#[derive(Debug)]
struct MarginTracker {
    min_margin: f64,
    argmin_n: u64,
    definitely_failed: bool,
    sample_every: Option<u64>,
    samples: Vec<TracePoint>,
}

impl MarginTracker {
    fn new(sample_every: Option<u64>) -> Self {
        MarginTracker {
            min_margin: f64::INFINITY,
            argmin_n: 0,
            definitely_failed: false,
            sample_every,
            samples: Vec::new(),
        }
    }

    #[inline]
    fn observe(&mut self, point: TracePoint) {
        let margin = point.margin();
        // Strict comparison keeps the smallest n on ties: n is scanned in
        // increasing order within a block and blocks merge in order.
        if margin < self.min_margin {
            self.min_margin = margin;
            self.argmin_n = point.n;
        }
        if margin < -NOISE_FLOOR * point.lhs.abs().max(point.rhs.abs()).max(1.0) {
            self.definitely_failed = true;
        }
        if let Some(every) = self.sample_every {
            if point.n.is_multiple_of(every) {
                self.samples.push(point);
            }
        }
    }

    fn absorb(&mut self, other: MarginTracker) {
        if other.min_margin < self.min_margin {
            self.min_margin = other.min_margin;
            self.argmin_n = other.argmin_n;
        }
        self.definitely_failed |= other.definitely_failed;
        self.samples.extend(other.samples);
    }

    fn into_report(self, bound_id: BoundId, n_lo: u64, n_hi: u64) -> BoundReport {
        let holds = self.min_margin >= 0.0;
        BoundReport {
            bound_id,
            n_lo,
            n_hi,
            holds,
            indeterminate: !holds && !self.definitely_failed,
            min_margin: self.min_margin,
            argmin_n: self.argmin_n,
            samples: if self.sample_every.is_some() {
                Some(self.samples)
            } else {
                None
            },
        }
    }
}

const TWO_LN_2: f64 = 2.0 * std::f64::consts::LN_2;

/// lhs and rhs of a bound whose state is the running ledger at n.
fn ledger_sides(id: BoundId, n: u64, ledger: &SumLedger, anchor: &MertensLowerBound) -> TracePoint {
    let log_n = (n as f64).ln();
    let (lhs, rhs) = match id {
        BoundId::Theorem2 => (ledger.entropy_majorant, log_n),
        BoundId::Theorem3 => (log_n + TWO_LN_2, ledger.mertens),
        BoundId::Corollary1ii => (ledger.mertens, (86.0 / 125.0) * log_n - 2.35),
        BoundId::GenLowerBound => (ledger.mertens, anchor.slope * log_n + anchor.offset),
        BoundId::ErdosTheta => (TWO_LN_2 * n as f64, ledger.theta),
        BoundId::ChaitinPi => (ledger.prime_count as f64, log_n / (log_n.ln() + 1.0)),
        BoundId::SquarefreePi => (ledger.prime_count as f64, log_n / TWO_LN_2),
        BoundId::ReversedTheorem2 => (log_n, ledger.entropy_majorant),
        _ => unreachable!("{id} is not a ledger-state bound"),
    };
    TracePoint { n, lhs, rhs }
}

/// Ledger state (prime sums and prime cursor) at the start of each block,
/// produced by one sequential walk over the prime list.
struct Checkpoint {
    start_n: u64,
    prime_idx: usize,
    prime_count: u64,
    theta: KahanSum,
    mertens: KahanSum,
    majorant: KahanSum,
}

fn block_starts(n_lo: u64, n_hi: u64) -> Vec<u64> {
    (n_lo..=n_hi).step_by(BLOCK_LEN as usize).collect()
}

fn ledger_checkpoints(primes: &[u64], starts: &[u64]) -> Vec<Checkpoint> {
    let mut idx = 0usize;
    let mut prime_count = 0u64;
    let mut theta = KahanSum::new();
    let mut mertens = KahanSum::new();
    let mut majorant = KahanSum::new();
    let mut out = Vec::with_capacity(starts.len());
    for &start in starts {
        while idx < primes.len() && primes[idx] < start {
            let p = primes[idx];
            let log_p = (p as f64).ln();
            theta.add(log_p);
            mertens.add(log_p / p as f64);
            majorant.add(majorant_term(p));
            prime_count += 1;
            idx += 1;
        }
        out.push(Checkpoint {
            start_n: start,
            prime_idx: idx,
            prime_count,
            theta,
            mertens,
            majorant,
        });
    }
    out
}

fn scan_ledger_block(
    id: BoundId,
    cp: &Checkpoint,
    end_n: u64,
    primes: &[u64],
    anchor: &MertensLowerBound,
    sample_every: Option<u64>,
) -> MarginTracker {
    let mut tracker = MarginTracker::new(sample_every);
    let mut idx = cp.prime_idx;
    let mut ledger = SumLedger {
        n: cp.start_n,
        prime_count: cp.prime_count,
        theta: cp.theta.value(),
        mertens: cp.mertens.value(),
        entropy_majorant: cp.majorant.value(),
    };
    let mut theta = cp.theta;
    let mut mertens = cp.mertens;
    let mut majorant = cp.majorant;
    for n in cp.start_n..=end_n {
        if idx < primes.len() && primes[idx] == n {
            let log_p = (n as f64).ln();
            theta.add(log_p);
            mertens.add(log_p / n as f64);
            majorant.add(majorant_term(n));
            ledger.prime_count += 1;
            ledger.theta = theta.value();
            ledger.mertens = mertens.value();
            ledger.entropy_majorant = majorant.value();
            idx += 1;
        }
        ledger.n = n;
        tracker.observe(ledger_sides(id, n, &ledger, anchor));
    }
    tracker
}

fn sweep_ledger_bound(
    id: BoundId,
    n_lo: u64,
    n_hi: u64,
    table: &PrimeTable,
    anchor: &MertensLowerBound,
    sample_every: Option<u64>,
) -> BoundReport {
    let primes = table.primes_upto(n_hi);
    let starts = block_starts(n_lo, n_hi);
    let checkpoints = ledger_checkpoints(primes, &starts);
    let blocks: Vec<MarginTracker> = checkpoints
        .par_iter()
        .map(|cp| {
            let end = (cp.start_n + BLOCK_LEN - 1).min(n_hi);
            scan_ledger_block(id, cp, end, primes, anchor, sample_every)
        })
        .collect();
    let mut merged = MarginTracker::new(sample_every);
    for block in blocks {
        merged.absorb(block);
    }
    merged.into_report(id, n_lo, n_hi)
}

fn sweep_erdos_step(
    n_lo: u64,
    n_hi: u64,
    table: &PrimeTable,
    sample_every: Option<u64>,
) -> Result<BoundReport> {
    let needed = 2 * n_hi + 1;
    if needed > table.limit() {
        return Err(Error::OutOfRange {
            n: needed,
            limit: table.limit(),
        });
    }
    let mut tracker = MarginTracker::new(sample_every);
    for n in n_lo..=n_hi {
        let gap = table.theta(2 * n + 1)? - table.theta(n + 1)?;
        tracker.observe(TracePoint {
            n,
            lhs: TWO_LN_2 * n as f64,
            rhs: gap,
        });
    }
    Ok(tracker.into_report(BoundId::ErdosStep, n_lo, n_hi))
}

fn sweep_ub1_chain(
    n_lo: u64,
    n_hi: u64,
    table: &PrimeTable,
    sample_every: Option<u64>,
) -> BoundReport {
    // E[ln N] accumulates through each integer's prime factorization, so the
    // route stays independent of the plain ln-sum oracle used in tests.
    let primes = table.primes_upto(n_hi.isqrt());
    let mut tracker = MarginTracker::new(sample_every);
    let mut log_factorial = KahanSum::new();
    for m in 2..=n_hi {
        let mut term = 0.0;
        for (p, e) in factorize_with(m, primes) {
            term += f64::from(e) * (p as f64).ln();
        }
        log_factorial.add(term);
        if m >= n_lo {
            tracker.observe(TracePoint {
                n: m,
                lhs: (m as f64).ln(),
                rhs: log_factorial.value() / m as f64,
            });
        }
    }
    tracker.into_report(BoundId::Ub1Chain, n_lo, n_hi)
}

#[inline]
fn abel_weight(x: f64) -> f64 {
    x / x.ln()
}

fn sweep_sumbp_identity(
    n_lo: u64,
    n_hi: u64,
    table: &PrimeTable,
    sample_every: Option<u64>,
) -> BoundReport {
    let primes = table.primes_upto(n_hi);
    let mut idx = 0usize;
    let mut mertens = KahanSum::new();
    let mut correction = KahanSum::new();
    let mut prime_count = 0u64;
    let mut tracker = MarginTracker::new(sample_every);
    for k in 2..=n_hi {
        if idx < primes.len() && primes[idx] == k {
            mertens.add((k as f64).ln() / k as f64);
            prime_count += 1;
            idx += 1;
        }
        correction.add((abel_weight(k as f64 + 1.0) - abel_weight(k as f64)) * mertens.value());
        if k >= n_lo {
            let reconstructed = abel_weight(k as f64 + 1.0) * mertens.value() - correction.value();
            tracker.observe(TracePoint {
                n: k,
                lhs: RECONSTRUCTION_TOLERANCE * prime_count as f64,
                rhs: (reconstructed - prime_count as f64).abs(),
            });
        }
    }
    tracker.into_report(BoundId::SumbpIdentity, n_lo, n_hi)
}

/// Sweep one bound over [n_lo, n_hi] (n_lo defaults to the bound's own
/// minimum). `anchor_n0` only matters for [`BoundId::GenLowerBound`].
pub fn verify_bound(
    id: BoundId,
    n_lo: Option<u64>,
    n_hi: u64,
    anchor_n0: u64,
    table: &PrimeTable,
) -> Result<BoundReport> {
    verify_bound_with_samples(id, n_lo, n_hi, anchor_n0, table, None)
}

/// As [`verify_bound`], also collecting a (n, lhs, rhs) sample every
/// `sample_every.unwrap()` integers when requested.
pub fn verify_bound_with_samples(
    id: BoundId,
    n_lo: Option<u64>,
    n_hi: u64,
    anchor_n0: u64,
    table: &PrimeTable,
    sample_every: Option<u64>,
) -> Result<BoundReport> {
    if id == BoundId::GenLowerBound && anchor_n0 < 2 {
        return Err(Error::domain(format!(
            "lower-bound anchor must be >= 2, got {anchor_n0}"
        )));
    }
    let min_n = id.min_n(anchor_n0);
    let n_lo = n_lo.unwrap_or(min_n);
    if n_lo < min_n {
        return Err(Error::domain(format!(
            "{id} is stated for n >= {min_n}, sweep asked from {n_lo}"
        )));
    }
    if n_lo > n_hi {
        return Err(Error::domain(format!("empty sweep range [{n_lo}, {n_hi}]")));
    }
    if n_hi > table.limit() {
        return Err(Error::OutOfRange {
            n: n_hi,
            limit: table.limit(),
        });
    }
    match id {
        BoundId::ErdosStep => sweep_erdos_step(n_lo, n_hi, table, sample_every),
        BoundId::Ub1Chain => Ok(sweep_ub1_chain(n_lo, n_hi, table, sample_every)),
        BoundId::SumbpIdentity => Ok(sweep_sumbp_identity(n_lo, n_hi, table, sample_every)),
        _ => {
            let anchor = if id == BoundId::GenLowerBound {
                MertensLowerBound::anchored_at(anchor_n0, table)?
            } else {
                // Unused by the other bounds; any valid value works.
                MertensLowerBound {
                    anchor: 2,
                    slope: 0.0,
                    offset: 0.0,
                }
            };
            Ok(sweep_ledger_bound(
                id,
                n_lo,
                n_hi,
                table,
                &anchor,
                sample_every,
            ))
        }
    }
}

pub fn verify_theorem2(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<BoundReport> {
    verify_bound(BoundId::Theorem2, Some(n_lo), n_hi, 16, table)
}

pub fn verify_theorem3(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<BoundReport> {
    verify_bound(BoundId::Theorem3, Some(n_lo), n_hi, 16, table)
}

pub fn verify_corollary1ii(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<BoundReport> {
    verify_bound(BoundId::Corollary1ii, Some(n_lo), n_hi, 16, table)
}

pub fn verify_gen_lower_bound(
    anchor_n0: u64,
    n_lo: u64,
    n_hi: u64,
    table: &PrimeTable,
) -> Result<BoundReport> {
    verify_bound(BoundId::GenLowerBound, Some(n_lo), n_hi, anchor_n0, table)
}

pub fn verify_erdos_theta(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<BoundReport> {
    verify_bound(BoundId::ErdosTheta, Some(n_lo), n_hi, 16, table)
}

pub fn verify_erdos_step(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<BoundReport> {
    verify_bound(BoundId::ErdosStep, Some(n_lo), n_hi, 16, table)
}

pub fn verify_chaitin_pi(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<BoundReport> {
    verify_bound(BoundId::ChaitinPi, Some(n_lo), n_hi, 16, table)
}

pub fn verify_squarefree_pi(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<BoundReport> {
    verify_bound(BoundId::SquarefreePi, Some(n_lo), n_hi, 16, table)
}

pub fn verify_ub1_chain(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<BoundReport> {
    verify_bound(BoundId::Ub1Chain, Some(n_lo), n_hi, 16, table)
}

pub fn verify_sumbp_identity(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<BoundReport> {
    verify_bound(BoundId::SumbpIdentity, Some(n_lo), n_hi, 16, table)
}

/// Convergence trace of C(n)/ln n at the given points; reporting only, no
/// pass/fail judgement.
pub fn ratio_trace(points: &[u64], table: &PrimeTable) -> Result<Vec<RatioPoint>> {
    points
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::domain(format!("trace point {n} is below 2")));
            }
            let mertens = mertens_sum(n, table)?;
            Ok(RatioPoint {
                n,
                mertens,
                ratio: mertens / (n as f64).ln(),
            })
        })
        .collect()
}
