//! Portable seeded generator for randomized test states and models.
//!
//! SplitMix64: the k-th output (k = 1, 2, …) of a stream seeded with `s` is
//! `mix(s + k·0x9E3779B97F4A7C15)` with wrapping arithmetic, where
//!
//! ```text
//! mix(z): z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!         z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!         z ^ (z >> 31)
//! ```
//!
//! Floats take the top 53 bits: `(u >> 11) * 2^-53`, uniform on [0, 1).
//! A child stream is split off by seeding a new generator with the parent's
//! next output, so any implementation reproduces the same sequence.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Output number `counter` (1-based) of the stream seeded with `seed`, without
    /// stepping through the preceding outputs.
    pub fn at(seed: u64, counter: u64) -> u64 {
        mix(seed.wrapping_add(counter.wrapping_mul(GAMMA)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn split(&mut self) -> Self {
        Self::new(self.next_u64())
    }
}
