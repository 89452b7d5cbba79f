//! Seed derivation for reproducible Monte Carlo.
//!
//! A trial seed is `mix(mix(mix(master) ^ point) ^ trial)` where `mix` is the
//! SplitMix64 finalizer and `point` is the FNV-1a hash of the grid point's
//! canonical label. `mix` is a bijection on `u64`, so for a fixed master seed
//! and grid point distinct trial indices always get distinct seeds.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function applied to `z + golden gamma`.
pub fn mix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over raw bytes; stable across platforms and releases.
pub fn stable_hash(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

pub fn derive_seed(master: u64, point_id: u64, trial: u64) -> u64 {
    mix64(mix64(mix64(master) ^ point_id) ^ trial)
}
