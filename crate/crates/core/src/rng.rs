//! Seeded pseudo-random source used by every randomized construction.
//!
//! The generator is xoshiro256** whose 256-bit state is expanded from the
//! 64-bit seed with splitmix64 (the reference seeding procedure of the
//! xoshiro authors). Bernoulli trials compare the top 53 bits of one output
//! word against `floor(prob * 2^53)`, so `prob = 1` always succeeds and
//! `prob = 0` never does.

use num_rational::BigRational;
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::scalar::unit_threshold_53;

#[derive(Clone, Debug)]
pub struct SeededRng {
    inner: Xoshiro256StarStar,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform 53-bit integer.
    pub fn next_u53(&mut self) -> u64 {
        self.next_u64() >> 11
    }

    pub fn next_f64(&mut self) -> f64 {
        self.next_u53() as f64 / (1u64 << 53) as f64
    }

    /// Uniform integer in `0..bound` (`bound > 0`), by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Bernoulli trial against a precomputed threshold from [`Bernoulli`].
    pub fn trial(&mut self, b: Bernoulli) -> bool {
        self.next_u53() < b.0
    }
}

/// A success probability in `[0, 1]` quantized to 53 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bernoulli(u64);

impl Bernoulli {
    pub fn new(prob: &BigRational) -> Self {
        Bernoulli(unit_threshold_53(prob))
    }

    pub fn always(self) -> bool {
        self.0 == 1 << 53
    }
}
