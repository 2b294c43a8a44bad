//! Counter-based splittable random streams.
//!
//! Every draw is a pure function of `(seed, stream_id, counter)`, so a stream
//! can be reconstructed anywhere from those three numbers and two streams with
//! different ids never influence each other. The mixer is the SplitMix64
//! finalizer (Steele, Lea & Flood), applied to a per-stream key plus a Weyl
//! sequence over the counter.

use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Subsystem tags combined with a level index to form stream ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Subsystem {
    Layout = 1,
    Populate = 2,
    Combat = 3,
    MonsterAi = 4,
    Shifting = 5,
    Agent = 6,
    Scenario = 7,
}

/// Stream id for a subsystem, optionally scoped to one level.
pub fn stream_id(subsystem: Subsystem, level: u64) -> u64 {
    (level << 8) | subsystem as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id, counter: 0 }
    }

    pub fn for_subsystem(seed: u64, subsystem: Subsystem, level: u64) -> Self {
        Self::new(seed, stream_id(subsystem, level))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of draws taken so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    fn key(&self) -> u64 {
        mix64(self.seed ^ mix64(self.stream_id.wrapping_add(STREAM_SALT)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key().wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform in `[0, bound)` by rejection; `bound` must be non-zero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below() called with zero bound");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range {lo}..={hi}");
        let span = (hi - lo) as u64 + 1;
        lo + self.below(span) as i64
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.unit_f64() < p
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> Option<&'a T> {
        if items.is_empty() {
            None
        } else {
            Some(&items[self.index(items.len())])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_and_stream_repeat() {
        let mut a = RngStream::new(42, 3);
        let mut b = RngStream::new(42, 3);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn frozen_reference_values() {
        // Pinned outputs; a change here breaks replay of every recorded episode.
        let mut rng = RngStream::new(1, 0);
        let first: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        let mut again = RngStream::new(1, 0);
        assert_eq!(first, (0..3).map(|_| again.next_u64()).collect::<Vec<_>>());
        assert_eq!(first, FROZEN_SEED1_STREAM0.to_vec());
    }

    // Computed independently from the SplitMix64 reference definition.
    const FROZEN_SEED1_STREAM0: [u64; 3] =
        [1026234351721057023, 11342086377554550832, 3072654213361691241];

    #[test]
    fn streams_do_not_advance_each_other() {
        let mut a = RngStream::new(9, 1);
        let mut b = RngStream::new(9, 2);
        let solo: Vec<u64> = {
            let mut c = RngStream::new(9, 1);
            (0..50).map(|_| c.next_u64()).collect()
        };
        let mut interleaved = Vec::new();
        for _ in 0..50 {
            interleaved.push(a.next_u64());
            b.next_u64();
            b.next_u64();
        }
        assert_eq!(solo, interleaved);
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = RngStream::new(9, 1);
        let mut b = RngStream::new(9, 2);
        let same = (0..100).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = RngStream::new(5, 5);
        let mut hits = [0usize; 6];
        for _ in 0..6000 {
            hits[rng.below(6) as usize] += 1;
        }
        assert!(hits.iter().all(|&h| (800..1200).contains(&h)), "{hits:?}");
    }

    #[test]
    fn unit_interval() {
        let mut rng = RngStream::new(0, 0);
        for _ in 0..10_000 {
            let x = rng.unit_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }
}
