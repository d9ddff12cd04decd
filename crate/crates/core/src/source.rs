//! Infinite binary sequences given as deterministic prefix oracles.

use std::fmt;
use std::sync::Arc;

use crate::word::Word;

/// SplitMix64 finalizer. Used wherever a catalog object needs reproducible
/// pseudo-random bits keyed by `(seed, index)`; stable across platforms and
/// toolchains, unlike `std`'s default hasher.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

type Generator = dyn Fn(usize) -> bool + Send + Sync;

/// An infinite sequence `A`, queried one position at a time.
#[derive(Clone)]
pub struct SequenceSource {
    generator: Arc<Generator>,
    description: String,
}

impl SequenceSource {
    pub fn new(description: impl Into<String>, generator: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        SequenceSource { generator: Arc::new(generator), description: description.into() }
    }

    pub fn all_zeros() -> Self {
        Self::new("all-zeros", |_| false)
    }

    pub fn all_ones() -> Self {
        Self::new("all-ones", |_| true)
    }

    /// `0101…`: 0 at even positions, 1 at odd ones.
    pub fn alternating() -> Self {
        Self::new("alternating", |i| i % 2 == 1)
    }

    pub fn periodic(pattern: Word) -> Self {
        assert!(!pattern.is_empty(), "periodic source needs a nonempty pattern");
        let desc = format!("periodic:{pattern}");
        Self::new(desc, move |i| pattern.bit(i % pattern.len()).unwrap())
    }

    pub fn pseudo_random(seed: u64) -> Self {
        Self::new(format!("random:{seed}"), move |i| mix64(seed ^ mix64(i as u64)) & 1 == 1)
    }

    pub fn thue_morse() -> Self {
        Self::new("thue-morse", |i| (i as u64).count_ones() % 2 == 1)
    }

    /// The given word followed by zeros.
    pub fn from_prefix(prefix: Word) -> Self {
        let desc = format!("prefix:{prefix}");
        Self::new(desc, move |i| prefix.bit(i).unwrap_or(false))
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.generator)(i)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// `A↾n`.
    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.bit(i)).collect()
    }
}

impl fmt::Debug for SequenceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("SequenceSource").field(&self.description).finish()
    }
}
