//! Portable seeded random numbers for scenario generation.
//!
//! The generator is ChaCha8 keyed through `rand_core`'s `seed_from_u64`
//! (PCG32 expansion of the 64-bit seed into the 256-bit key). A uniform
//! double takes the top 53 bits of the next 64-bit output and scales them
//! by 2^-53, giving a value in `[0, 1)`. Both steps are fully specified, so
//! another implementation can reproduce the stream bit for bit.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone)]
pub struct ScenarioRng(ChaCha8Rng);

impl ScenarioRng {
    pub fn new(seed: u64) -> Self {
        ScenarioRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform sample in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform sample in `[lo, hi)`; exactly `lo` when the range is empty.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}
