//! Named, seeded random streams.
//!
//! Every consumer of randomness (field placement, LEACH election, LEACH-C
//! seeding, RCFT draws) owns its own stream keyed by `(seed, label)`. Streams
//! are ChaCha8 keyed by the seed with the ChaCha stream id set from a 64-bit
//! FNV-1a hash of the label, so two labels never share a keystream and adding
//! a new consumer does not shift the values seen by existing ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    label: String,
    inner: ChaCha8Rng,
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

impl RngStream {
    pub fn new(seed: u64, label: &str) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(fnv1a64(label.as_bytes()));
        Self {
            seed,
            label: label.to_owned(),
            inner,
        }
    }

    /// Derives an independent stream `"{label}/{sub}"` with the same seed.
    pub fn fork(&self, sub: &str) -> Self {
        Self::new(self.seed, &format!("{}/{}", self.label, sub))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform draw in `[lo, hi)`; returns `lo` when the interval is empty.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return lo;
        }
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        self.inner.random_range(0..n)
    }

    /// `k` distinct elements of `pool`, uniformly without replacement
    /// (partial Fisher-Yates). Order follows the draw order.
    pub fn choose_distinct<T: Copy>(&mut self, pool: &[T], k: usize) -> Vec<T> {
        let k = k.min(pool.len());
        let mut scratch = pool.to_vec();
        for i in 0..k {
            let j = i + self.below(scratch.len() - i);
            scratch.swap(i, j);
        }
        scratch.truncate(k);
        scratch
    }
}
