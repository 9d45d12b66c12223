//! Counter-based stream derivation.
//!
//! Every random draw in the engine is addressed by a tuple such as
//! `(master seed, world key, stage, trial)`. The tuple is folded into a
//! 64-bit key with a SplitMix64 finalizer and the key seeds a ChaCha8
//! stream. No generator state is shared between work items, so results do
//! not depend on scheduling.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use sha2::{Digest, Sha256};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds an ordered list of words into one stream key.
pub fn stream_key(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(GOLDEN, |acc, &p| mix(acc.wrapping_add(GOLDEN) ^ mix(p.wrapping_add(GOLDEN))))
}

/// Stable 64-bit key for a textual identifier (world ids, labels).
pub fn label_key(label: &str) -> u64 {
    let digest = Sha256::digest(label.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn stream(key: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(key)
}
