//! Seedable, splittable randomness.
//!
//! A [`RandomSource`] names a ChaCha8 key (derived from `seed`) and a stream
//! within that key. ChaCha streams under one key are independent, so each
//! user of a protocol run draws from its own stream and trials can run in any
//! order or in parallel without changing a single draw.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The concrete generator handed to randomizers.
pub type StreamRng = ChaCha8Rng;

/// Stream reserved for the shuffler of a protocol run.
pub const SHUFFLE_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
    pub stream: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    /// Derives an independent key for a sub-experiment (e.g. a trial).
    ///
    /// The child seed is a SplitMix64 finalization of the parent key, stream
    /// and label, so children of distinct labels never share a key in practice.
    pub fn child(&self, label: u64) -> Self {
        let mixed = splitmix64(
            splitmix64(self.seed ^ 0x5851_F42D_4C95_7F2D)
                ^ splitmix64(self.stream.wrapping_add(0x9E37_79B9))
                ^ label.wrapping_mul(0xD6E8_FEB8_6659_FD93),
        );
        Self {
            seed: mixed,
            stream: 0,
        }
    }

    /// Instantiates the generator for this (seed, stream) pair.
    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
