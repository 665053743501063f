// SPDX-License-Identifier: MIT OR Apache-2.0

//! Pinned random source.
//!
//! All synthetic data comes from ChaCha with 8 rounds (`rand_chacha`),
//! keyed through `SeedableRng::seed_from_u64`; both are specified
//! bit-for-bit and portable. Unit draws take the top 53 bits of a `u64`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone)]
pub struct SampleRng {
    inner: ChaCha8Rng,
}

impl SampleRng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn open_unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Fair coin.
    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

/// SplitMix64 finalizer; mixes structured inputs into well-spread seeds.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `trial` at series length `len` under a base seed.
pub fn derive_seed(base: u64, len: usize, trial: usize) -> u64 {
    mix64(mix64(base ^ mix64(len as u64)) ^ trial as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_stream() {
        let mut a = SampleRng::seed_from_u64(42);
        let mut b = SampleRng::seed_from_u64(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn open_unit_bounds() {
        let mut r = SampleRng::seed_from_u64(1);
        for _ in 0..10_000 {
            let u = r.open_unit();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(7, 1024, 0);
        assert_ne!(a, derive_seed(7, 1024, 1));
        assert_ne!(a, derive_seed(7, 2048, 0));
        assert_ne!(a, derive_seed(8, 1024, 0));
        assert_eq!(a, derive_seed(7, 1024, 0));
    }
}
