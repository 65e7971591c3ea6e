//! Reproducible per-replication random streams.
//!
//! Each simulation is keyed by a 64-bit seed plus a purpose tag; each
//! replication then gets its own ChaCha8 stream (`set_stream(rep)`). A
//! replication's draws depend only on `(seed, purpose, rep)`, so results are
//! identical whatever the thread count or scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over a purpose label, so tags are stable across builds.
pub fn tag(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// A family of independent replication streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamFamily {
    key: u64,
}

impl StreamFamily {
    pub fn new(seed: u64, parts: &[u64]) -> Self {
        let key = parts
            .iter()
            .fold(mix64(seed), |acc, &p| mix64(acc ^ mix64(p)));
        StreamFamily { key }
    }

    pub fn stream(&self, replication: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.key);
        rng.set_stream(replication);
        rng
    }
}
