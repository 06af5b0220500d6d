//! Derived seeds for independent, order-free random streams.

/// SplitMix64 finalizer applied to `seed` mixed with `index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds several indices into one seed.
pub fn derive_seed_path(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(seed, |s, &i| derive_seed(s, i))
}
