//! Seed derivation.
//!
//! Every stage draws its randomness from a seed derived from the master seed
//! and a small tuple of indices, so stages never share a stream.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One splitmix64 output for state `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `parts` into `master` one splitmix step at a time.
pub fn derive(master: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(master), |acc, &p| {
        splitmix64(acc ^ splitmix64(p.wrapping_add(GAMMA)))
    })
}

/// Stage tags used with [`derive`].
pub mod stage {
    pub const SAMPLE: u64 = 1;
    pub const DAMAGE: u64 = 2;
    pub const INIT: u64 = 3;
    pub const SYNTHETIC: u64 = 4;
}
