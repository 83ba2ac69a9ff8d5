//! Deterministic seed derivation.
//!
//! Child seeds are derived from a master seed and a path of integers with the
//! SplitMix64 finalizer, so independent streams (per daughter, per trial) do
//! not depend on the order in which they are drawn.

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `path` into `master`.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// 64-bit FNV-1a of a label, for use as a path component.
pub fn label(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Stream tags used by the simulator.
pub(crate) mod stream {
    pub const PROTO: u64 = 1;
    pub const MERGERS: u64 = 2;
    pub const NOISE: u64 = 3;
    pub const REPLACE: u64 = 4;
    pub const SUBSAMPLE: u64 = 5;
}
