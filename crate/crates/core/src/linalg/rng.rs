//! Deterministic pseudo-random vectors from a splitmix64 stream.
//!
//! Coefficients are drawn as `(x mod 19) − 9`, giving integers in `[−9, 9]`.
//! Small ranges are drawn as `x mod n`. Both mappings are fixed so that a seed
//! reproduces the same vector on every platform.

use crate::error::{Error, Result};
use crate::linalg::sparse::SparseVector;
use crate::scalar::Scalar;

/// The splitmix64 generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    /// A generator seeded with `seed`.
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Next 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// A value in `0..n` computed as `next mod n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// One fair bit.
    pub fn bit(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// An integer coefficient in `[−9, 9]`.
    pub fn coefficient(&mut self) -> i64 {
        (self.next_u64() % 19) as i64 - 9
    }

    /// `count` distinct elements of `items`, kept in their original order.
    pub fn choose<T: Clone>(&mut self, items: &[T], count: usize) -> Vec<T> {
        let count = count.min(items.len());
        let mut idx: Vec<usize> = (0..items.len()).collect();
        for i in 0..count {
            let j = i + self.below((idx.len() - i) as u64) as usize;
            idx.swap(i, j);
        }
        let mut picked = idx[..count].to_vec();
        picked.sort_unstable();
        picked.into_iter().map(|i| items[i].clone()).collect()
    }
}

/// A space whose basis keys can be sampled under an index bound.
pub trait BasisSampler {
    /// Basis key type.
    type Key: Ord + Clone;

    /// Draws one basis key whose indices are all bounded by `bound` in absolute value.
    fn sample_key(&self, rng: &mut SplitMix64, bound: i64) -> Self::Key;
}

/// A seeded random vector with one to four terms and coefficients in `[−9, 9]`.
pub fn random_vector<S: BasisSampler>(space: &S, seed: u64, bound: i64) -> Result<SparseVector<S::Key>> {
    if bound < 1 {
        return Err(Error::InvalidParameter(format!(
            "support bound must be at least 1, got {bound}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let terms = 1 + rng.below(4);
    let mut v = SparseVector::new();
    for _ in 0..terms {
        let key = space.sample_key(&mut rng, bound);
        let c = rng.coefficient();
        v.add_term(key, Scalar::from_integer(c));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_outputs() {
        // Published splitmix64 outputs for seed 1234567.
        let mut g = SplitMix64::new(1234567);
        let got: Vec<u64> = (0..3).map(|_| g.next_u64()).collect();
        assert_eq!(got, vec![6457827717110365317, 3203168211198807973, 9817491932198370423]);
    }

    #[test]
    fn coefficients_stay_in_range() {
        let mut g = SplitMix64::new(0);
        for _ in 0..10_000 {
            let c = g.coefficient();
            assert!((-9..=9).contains(&c));
        }
    }

    #[test]
    fn choose_is_ordered_and_distinct() {
        let mut g = SplitMix64::new(3);
        let items: Vec<i32> = (0..10).collect();
        for k in 0..=10 {
            let c = g.choose(&items, k);
            assert_eq!(c.len(), k);
            assert!(c.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
