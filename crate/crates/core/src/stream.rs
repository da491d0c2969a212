//! Deterministic seed derivation.
//!
//! Every random decision is keyed by a root seed plus a short tuple of
//! integers (domain tag, voter, pair endpoints, ...). Keying by content rather
//! than by draw order means a vote does not depend on when it is requested,
//! so memoization and reproducibility coincide.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags keep independent uses of the same ids apart.
pub mod tag {
    pub const GRAPH: u64 = 1;
    pub const WEIGHTS: u64 = 2;
    pub const BYZANTINE_IDS: u64 = 3;
    pub const GOOD_VOTE: u64 = 4;
    pub const FLIPPED_VOTE: u64 = 5;
    pub const SUBSET_COIN: u64 = 6;
    pub const FIXED_ORDER: u64 = 7;
    pub const FLIP_PERM: u64 = 8;
    pub const ASSIGN: u64 = 9;
    pub const TRIAL: u64 = 10;
    pub const RESAMPLE: u64 = 11;
    pub const CORPUS: u64 = 12;
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a root seed with a sequence of keys into a new 64-bit seed.
#[inline]
pub fn derive(seed: u64, keys: &[u64]) -> u64 {
    let mut h = mix64(seed.wrapping_add(GOLDEN));
    for &k in keys {
        h = mix64(h ^ k.wrapping_add(GOLDEN).wrapping_add(h << 6).wrapping_add(h >> 2));
    }
    h
}

/// Uniform draw in `[0, 1)` from a derived seed, 53 bits of precision.
#[inline]
pub fn unit(seed: u64, keys: &[u64]) -> f64 {
    (derive(seed, keys) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Full RNG for decisions that need more than one draw.
pub fn rng(seed: u64, keys: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, keys))
}
