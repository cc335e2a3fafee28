//! Counter-based random streams.
//!
//! Every stochastic draw in the crate comes from a ChaCha stream keyed by
//! `(seed, tag, index)` through a SplitMix avalanche, so any sample can be
//! regenerated in isolation and results never depend on scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a stream key from the master seed, a stream tag and a draw index.
pub fn derive_key(seed: u64, tag: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ tag) ^ index)
}

/// A dedicated generator for one `(seed, tag, index)` triple.
pub fn stream_rng(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_key(seed, tag, index))
}
