//! Seed derivation.
//!
//! Every random draw in the crate comes from a ChaCha stream keyed by a
//! 64-bit seed. Independent jobs (Monte-Carlo trial `i`, frame `f` of sweep
//! point `p`, ...) obtain their own seed through [`derive`], so results do not
//! depend on execution order or on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG used for all simulation randomness.
pub type SimRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `seed` and a path of tags.
pub fn derive(seed: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(seed), |acc, &t| splitmix64(acc ^ splitmix64(t.wrapping_add(0x51_7CC1_B727_220A))))
}

/// Builds the RNG for `seed`.
pub fn rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Shorthand for `rng(derive(seed, tags))`.
pub fn sub_rng(seed: u64, tags: &[u64]) -> SimRng {
    rng(derive(seed, tags))
}
