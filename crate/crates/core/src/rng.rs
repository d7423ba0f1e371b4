//! Seeded random streams.
//!
//! Every run has one root seed. Each consumer (initialization, velocity
//! draws, acceptance tests, ...) asks for a child stream by a fixed label,
//! so the draws seen by one component never depend on how many numbers
//! another component consumed.
//!
//! Generator: ChaCha8 from `rand_chacha`, seeded through
//! `SeedableRng::seed_from_u64`. The child seed is
//! `splitmix64(root ^ fnv1a64(label))`. Both the generator and the
//! derivation are platform independent.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(FNV_PRIME)
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the child stream `label` under `root`.
pub fn child_seed(root: u64, label: &str) -> u64 {
    splitmix64(root ^ fnv1a64(label.as_bytes()))
}

/// A labelled ChaCha8 stream that counts the words it has produced.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
    draws: u64,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
            draws: 0,
        }
    }

    pub fn child(root: u64, label: &str) -> Self {
        Self::from_seed(child_seed(root, label))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 32/64-bit words (or byte fills) handed out so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.draws += 1;
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.draws += 1;
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RngStream::child(42, "bpso/init");
        let mut b = RngStream::child(42, "bpso/init");
        let xs: Vec<u64> = (0..32).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..32).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_eq!(a.draws(), 32);
    }

    #[test]
    fn labels_separate_streams() {
        let mut a = RngStream::child(42, "bpso/init");
        let mut b = RngStream::child(42, "bpso/velocity");
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn derivation_is_pinned() {
        // Frozen so a refactor cannot silently change every seeded run.
        assert_eq!(fnv1a64(b""), FNV_OFFSET);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn uniform_draws_stay_in_unit_interval() {
        let mut s = RngStream::from_seed(7);
        for _ in 0..1000 {
            let u: f64 = s.random();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
