//! Seeded substreams for Monte Carlo ensembles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed of trial `t` under `master`: the SplitMix64 finalizer applied to
/// `master + (t + 1)·φ`, with `φ` the 64-bit golden-ratio increment.
///
/// Every trial gets its own generator, so results do not depend on the order
/// in which trials run.
pub fn derive_seed(master: u64, trial: u64) -> u64 {
    let mut z = master.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
