//! Seeded, splittable random number generator used by every sampling routine.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 20_180_411;

/// Deterministic generator. Two instances built from the same seed produce
/// identical streams; [`SimRng::split`] derives an independent child stream.
#[derive(Clone, Debug)]
pub struct SimRng {
    inner: ChaCha12Rng,
}

impl SimRng {
    pub fn seed_from(seed: u64) -> Self {
        Self {
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Seeds from operating-system entropy. Returns the seed so runs can be
    /// replayed.
    pub fn from_entropy() -> (Self, u64) {
        let seed = rand::random::<u64>();
        (Self::seed_from(seed), seed)
    }

    /// Child generator on a fresh stream. Advances `self`.
    pub fn split(&mut self) -> SimRng {
        let mut seed = [0u8; 32];
        self.inner.fill_bytes(&mut seed);
        let mut inner = ChaCha12Rng::from_seed(seed);
        inner.set_stream(self.inner.next_u64());
        SimRng { inner }
    }

    /// Uniform sample from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        // 53 random mantissa bits
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        use rand::Rng;
        self.inner.random_range(0..bound)
    }
}

impl RngCore for SimRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
