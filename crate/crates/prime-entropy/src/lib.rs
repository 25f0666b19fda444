//! Prime sums, exact factorization-exponent laws, and the entropy chain that
//! links them — with an exhaustive finite-n verification engine.
//!
//! For N drawn uniformly from {1..n}, the exponent X_p of each prime p in the
//! factorization of N has the exact law P{X_p >= k} = floor(n/p^k)/n. This
//! crate computes those laws in exact rational arithmetic, the entropies and
//! geometric envelopes built on them, and the classical prime sums pi(n),
//! theta(n), C(n) = Σ (ln p)/p and T(n) = Σ [ln p/(p−1) − ln(1 − 1/p)]. A
//! sweep engine then checks every supported inequality at every integer of a
//! range — millions of points in one streaming pass — and reports the worst
//! margin, where it occurred, and whether the statement held.
//!
//! ```
//! use prime_entropy::{PrimeTable, marginal_entropy_sum, entropy_majorant};
//!
//! let table = PrimeTable::sieve(1_000)?;
//! let n = 720;
//! // ln n <= Σ H(X_p) <= T(n): the entropy chain at one n.
//! let log_n = (n as f64).ln();
//! let entropy_sum = marginal_entropy_sum(n, &table)?;
//! let majorant = entropy_majorant(n, &table)?;
//! assert!(log_n <= entropy_sum && entropy_sum <= majorant);
//! # Ok::<(), prime_entropy::Error>(())
//! ```
//!
//! ```
//! use prime_entropy::{PrimeTable, verify_theorem2};
//!
//! let table = PrimeTable::sieve(100_000)?;
//! let report = verify_theorem2(2, 100_000, &table)?;
//! assert!(report.holds && report.min_margin > 0.0);
//! # Ok::<(), prime_entropy::Error>(())
//! ```
//!
//! The `book/` directory of the repository walks through the concepts; its
//! code snippets compile and run as doc-tests of this crate.

mod error;
mod exponents;
mod kahan;
mod ledger;
mod primes;
mod sampling;
mod sums;
mod verify;

pub use error::{Error, Result};
pub use exponents::{
    exponent_laws, geometric_entropy, joint_exponent_entropy, marginal_entropy_sum, mean_log_sum,
    squarefree_decompose, ExponentDistribution, Geometric, Rational, SquareFreeDecomposition,
    JOINT_ENUMERATION_CAP,
};
pub use kahan::KahanSum;
pub use ledger::{stream_ledgers, Ledgers, SumLedger};
pub use primes::{
    is_prime, PrimeTable, SegmentedSieve, DEFAULT_MEMORY_BUDGET, DEFAULT_SEGMENT_LEN,
};
pub use sampling::{
    geometric_limit_gap, independence_gap, sample_exponents, tv_distance, EmpiricalLaw,
    INDEPENDENCE_CELL_BUDGET, MAX_SUBSET_SIZE,
};
pub use sums::{entropy_majorant, mertens_sum, prime_count_by_parts, MertensLowerBound};
pub use verify::{
    ratio_trace, verify_bound, verify_bound_with_samples, verify_chaitin_pi, verify_corollary1ii,
    verify_erdos_step, verify_erdos_theta, verify_gen_lower_bound, verify_squarefree_pi,
    verify_sumbp_identity, verify_theorem2, verify_theorem3, verify_ub1_chain, BoundId,
    BoundReport, RatioPoint, TracePoint, NOISE_FLOOR, RECONSTRUCTION_TOLERANCE,
};

// The guide chapters double as doc-tests so the book can never drift from
// the library. `cargo test --doc` compiles and runs every snippet.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/prime-sums.md")]
    pub struct PrimeSums;
    #[doc = include_str!("../../../book/src/exponent-laws.md")]
    pub struct ExponentLaws;
    #[doc = include_str!("../../../book/src/entropy-chain.md")]
    pub struct EntropyChain;
    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;
    #[doc = include_str!("../../../book/src/sampling.md")]
    pub struct Sampling;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct CommandLine;
}
