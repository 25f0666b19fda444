//! Compensated (Kahan) summation.
//!
//! Every real-valued prime sum in this crate accumulates millions of small
//! terms; plain summation loses digits that the inequality sweeps then report
//! as spurious margins. The accumulator state is plain-old-data so that sweep
//! checkpoints can capture and resume it exactly.

use serde::{Deserialize, Serialize};

#[derive(Debug, Default, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

impl From<KahanSum> for f64 {
    fn from(k: KahanSum) -> f64 {
        k.value()
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_digits_naive_summation_loses() {
        // 1 + n*eps summed as 1 + eps + eps + ... must not collapse to 1.
        let eps = f64::EPSILON / 4.0;
        let n = 1_000_000;
        let mut naive = 1.0f64;
        let mut kahan = KahanSum::new();
        kahan.add(1.0);
        for _ in 0..n {
            naive += eps;
            kahan.add(eps);
        }
        assert_eq!(naive, 1.0, "naive summation should lose these terms");
        let expected = 1.0 + n as f64 * eps;
        assert!((kahan.value() - expected).abs() < 1e-12);
    }

    #[test]
    fn resuming_from_copied_state_matches_single_pass() {
        let terms: Vec<f64> = (1..500).map(|k| (k as f64).ln() / k as f64).collect();
        let mut full = KahanSum::new();
        for &t in &terms {
            full.add(t);
        }
        let mut first = KahanSum::new();
        for &t in &terms[..200] {
            first.add(t);
        }
        let mut resumed = first; // Copy of the whole state, compensation included
        for &t in &terms[200..] {
            resumed.add(t);
        }
        assert_eq!(full.value(), resumed.value());
    }
}
