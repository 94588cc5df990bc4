//! Seeded randomness for measurement.
//!
//! Every stream is a ChaCha8 generator. A root stream is keyed by
//! `ChaCha8Rng::seed_from_u64(seed)`. Derived streams (one per round, one per
//! participant) are keyed by `SHA-256(seed_le || tag_le)`, so a transcript only
//! depends on the seed and the tag path, never on evaluation order across
//! streams. Uniform reals come from `rand`'s `StandardUniform` for `f64`
//! (53 random mantissa bits), which is platform independent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent sub-stream for `tag` (participant id, round number, ...).
    ///
    /// Depends only on this stream's seed, not on how much of it was consumed.
    pub fn derive(&self, tag: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(self.seed.to_le_bytes());
        hasher.update(tag.to_le_bytes());
        let digest = hasher.finalize();
        let mut key = [0u8; 32];
        key.copy_from_slice(&digest);
        let derived_seed = u64::from_le_bytes(key[..8].try_into().expect("8 bytes"));
        Self { seed: derived_seed, rng: ChaCha8Rng::from_seed(key) }
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random::<u64>()
    }

    pub fn next_bit(&mut self) -> u8 {
        (self.rng.random::<u32>() & 1) as u8
    }

    pub fn fill_bytes(&mut self, out: &mut [u8]) {
        self.rng.fill(out);
    }
}
