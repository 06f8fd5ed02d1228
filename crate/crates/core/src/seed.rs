//! Seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded through
//! [`derive_seed`], so a single master seed fixes all results on every
//! platform and regardless of thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed number `stream` of `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    mix64(master.wrapping_add(mix64(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))))
}

pub fn rng_for(master: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream))
}
