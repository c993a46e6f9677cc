//! Splittable deterministic randomness.
//!
//! Every random bit used by the game and graph builders is a pure function of
//! `(seed, i, j)` through the SplitMix64 finalizer, so generation order and
//! parallelism never change the output.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64 pseudo-random bits addressed by `(seed, stream, i, j)`.
pub fn hash4(seed: u64, stream: u64, i: u64, j: u64) -> u64 {
    let mut h = splitmix64(seed);
    h = splitmix64(h ^ stream.wrapping_mul(GOLDEN));
    h = splitmix64(h ^ i);
    splitmix64(h ^ j.rotate_left(32))
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
pub fn unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Exact Bernoulli(`num/den`) draw from 64 hashed bits.
pub fn bernoulli(bits: u64, num: u64, den: u64) -> bool {
    debug_assert!(den > 0 && num <= den);
    // bits / 2^64 < num / den  <=>  bits * den < num * 2^64
    (bits as u128) * (den as u128) < (num as u128) << 64
}
