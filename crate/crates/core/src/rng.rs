//! Deterministic seed derivation.
//!
//! Every randomized operation in this crate takes an explicit 64-bit seed
//! and drives a counter-based generator ([`rand_chacha::ChaCha8Rng`]), so a
//! run is reproducible bit-for-bit. When one master seed has to fan out into
//! many independent streams (benchmark rows, per-term sampling circuits),
//! [`derive_seed`] mixes the master seed with a stream index; the derived
//! seeds are stable regardless of execution order, which keeps parallel and
//! serial runs identical.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derive an independent child seed from a master seed and a stream index.
///
/// SplitMix64 finalizer over `master + (index+1)·golden_gamma`; one output
/// per (master, index) pair.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut z = master.wrapping_add(GAMMA.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based generator for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
