//! Seeded generator and seed derivation.
//!
//! Every random object is a pure function of a 64-bit seed. Independent
//! streams for replicates are derived with [`replicate_seed`], which chains the
//! SplitMix64 finalizer over `(master_seed, grid_index, replicate_index)`.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// The generator behind every sampling routine.
pub type Generator = Xoshiro256PlusPlus;

/// Recorded in experiment metadata.
pub const GENERATOR_NAME: &str = "xoshiro256++/seed_from_u64 (rand_xoshiro 0.7)";

/// Additive constant of SplitMix64 (2^64 / golden ratio).
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn generator(seed: u64) -> Generator {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// SplitMix64 output function applied to `x + GOLDEN_GAMMA`.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `mix(a, b) = splitmix64(a ^ splitmix64(b))`.
#[inline]
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b))
}

/// Seed of replicate `replicate` at grid point `grid_index`.
pub fn replicate_seed(master_seed: u64, grid_index: u64, replicate: u64) -> u64 {
    mix(mix(master_seed, grid_index), replicate)
}
