//! Seed splitting.
//!
//! Every Monte Carlo draw `d` under master seed `s` gets its own ChaCha8
//! stream seeded with `substream_seed(s, d)`. The mapping is fixed: changing
//! it changes every recorded result, so treat it as part of the file format.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for all sampling.
pub type Stream = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `mix64(seed + (draw + 1) * GOLDEN_GAMMA)`; the SplitMix64 state after
/// `draw + 1` steps from `seed`.
pub fn substream_seed(seed: u64, draw: u64) -> u64 {
    mix64(seed.wrapping_add(draw.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Independent stream for draw `draw` under master seed `seed`.
pub fn substream(seed: u64, draw: u64) -> Stream {
    Stream::seed_from_u64(substream_seed(seed, draw))
}
