//! Sampling helpers on top of [`rand_core::RngCore`].

use rand_core::RngCore;

/// Uniform `f64` in `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draw an index from a cumulative distribution (last entry should be 1).
#[inline]
pub fn sample_cdf<R: RngCore + ?Sized>(cdf: &[f64], rng: &mut R) -> usize {
    let u = uniform(rng);
    match cdf.iter().position(|&c| u < c) {
        Some(i) => i,
        // rounding left the last entry slightly below 1: fall back to the last
        // symbol that carries mass
        None => cdf
            .iter()
            .enumerate()
            .rev()
            .find(|&(i, &c)| i == 0 || c > cdf[i - 1])
            .map(|(i, _)| i)
            .unwrap_or(0),
    }
}

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `keys` into `seed`; distinct key tuples give unrelated seeds.
pub fn derive_seed(seed: u64, keys: &[u64]) -> u64 {
    keys.iter().fold(splitmix64(seed), |acc, &k| splitmix64(acc ^ splitmix64(k)))
}
