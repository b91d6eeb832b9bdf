use super::Freshness;
use crate::error::{Error, Result};
use crate::hashes::HashFamily;

pub const DEFAULT_M: usize = 512;
pub const DEFAULT_CAPACITY: usize = 256;

/// Bloom filter over freshness tags.
///
/// Addresses are `hash mod m`. Once `capacity` tags have been inserted the
/// next fresh tag clears the vector and starts a new epoch, so a tag is only
/// remembered for the epoch it was inserted in. A vector with every cell set
/// flags any query, so it also starts a new epoch right after reporting one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BloomState {
    bits: Vec<u64>,
    m: usize,
    family: HashFamily,
    ones: usize,
    inserted: usize,
    capacity: usize,
    epoch: u64,
}

impl BloomState {
    pub fn new(m: usize, family: HashFamily, capacity: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::NonPositive("m"));
        }
        if capacity == 0 {
            return Err(Error::NonPositive("capacity"));
        }
        Ok(BloomState {
            bits: vec![0; m.div_ceil(64)],
            m,
            family,
            ones: 0,
            inserted: 0,
            capacity,
            epoch: 0,
        })
    }

    pub fn with_defaults() -> Self {
        Self::new(DEFAULT_M, HashFamily::standard(), DEFAULT_CAPACITY).expect("defaults are valid")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.family.k()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn addresses<'a>(&'a self, tag: &'a [u8]) -> impl Iterator<Item = usize> + 'a {
        self.family.hashes(tag).map(|h| finalize(h) as usize % self.m)
    }

    pub fn contains(&self, tag: &[u8]) -> bool {
        self.addresses(tag).all(|a| self.get(a))
    }

    pub fn check_insert(&mut self, tag: &[u8]) -> Freshness {
        if self.contains(tag) {
            if self.ones == self.m {
                self.clear();
                self.epoch += 1;
            }
            return Freshness::Replayed;
        }
        if self.inserted == self.capacity {
            self.clear();
            self.epoch += 1;
        }
        self.insert(tag);
        Freshness::Fresh
    }

    /// Sets the tag's cells without testing membership or applying the
    /// reset rule.
    pub fn insert(&mut self, tag: &[u8]) {
        let addrs: Vec<usize> = self.addresses(tag).collect();
        for a in addrs {
            let (w, b) = (a / 64, 1u64 << (a % 64));
            if self.bits[w] & b == 0 {
                self.bits[w] |= b;
                self.ones += 1;
            }
        }
        self.inserted += 1;
    }

    pub fn clear(&mut self) {
        self.bits.iter_mut().for_each(|w| *w = 0);
        self.ones = 0;
        self.inserted = 0;
    }

    pub fn state_bytes(&self) -> usize {
        self.m.div_ceil(8)
    }
}

/// Murmur3 finalizer. The string hashes are close to linear in their last
/// input byte, so their low bits alone would map consecutive counters onto
/// shifted copies of the same address pattern.
pub fn finalize(mut h: u32) -> u32 {
    h ^= h >> 16;
    h = h.wrapping_mul(0x85eb_ca6b);
    h ^= h >> 13;
    h = h.wrapping_mul(0xc2b2_ae35);
    h ^ (h >> 16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_filter_reports_fresh() {
        let mut b = BloomState::with_defaults();
        assert_eq!(b.ones(), 0);
        assert!(b.check_insert(b"\x00\x01\x00\x05").is_fresh());
        assert_eq!(b.inserted(), 1);
        assert!(b.ones() >= 1 && b.ones() <= 8);
    }

    #[test]
    fn same_tag_twice() {
        let mut b = BloomState::with_defaults();
        b.check_insert(b"tag");
        assert_eq!(b.check_insert(b"tag"), Freshness::Replayed);
        assert_eq!(b.inserted(), 1);
    }

    #[test]
    fn reset_opens_a_new_epoch() {
        let mut b = BloomState::new(512, HashFamily::standard(), 4).unwrap();
        let mut fresh = 0u32;
        let mut i = 0u32;
        while fresh < 4 {
            if b.check_insert(&i.to_be_bytes()).is_fresh() {
                fresh += 1;
            }
            i += 1;
        }
        assert_eq!((b.inserted(), b.epoch()), (4, 0));
        let next = loop {
            i += 1;
            if !b.contains(&i.to_be_bytes()) {
                break i;
            }
        };
        assert!(b.check_insert(&next.to_be_bytes()).is_fresh());
        assert_eq!((b.inserted(), b.epoch()), (1, 1));
        assert!(b.contains(&next.to_be_bytes()));
    }

    #[test]
    fn full_vector_starts_a_new_epoch() {
        let mut b = BloomState::new(8, HashFamily::standard(), 1_000).unwrap();
        let mut i = 0u32;
        while b.ones() < 8 {
            b.check_insert(&i.to_be_bytes());
            i += 1;
        }
        assert_eq!(b.check_insert(b"anything"), Freshness::Replayed);
        assert_eq!((b.ones(), b.inserted(), b.epoch()), (0, 0, 1));
    }

    proptest::proptest! {
        #[test]
        fn no_false_negatives_within_an_epoch(tags in proptest::collection::vec(proptest::collection::vec(proptest::num::u8::ANY, 1..8), 1..64)) {
            let mut b = BloomState::new(512, HashFamily::standard(), 1_000).unwrap();
            let before = b.ones();
            for t in &tags {
                b.check_insert(t);
            }
            proptest::prop_assert!(b.ones() >= before);
            for t in &tags {
                proptest::prop_assert!(b.contains(t));
                proptest::prop_assert_eq!(b.check_insert(t), Freshness::Replayed);
            }
        }

        #[test]
        fn bits_only_rise(tags in proptest::collection::vec(proptest::num::u32::ANY, 1..64)) {
            let mut b = BloomState::new(4096, HashFamily::standard(), 10_000).unwrap();
            let mut prev = b.bits.clone();
            for t in tags {
                b.check_insert(&t.to_be_bytes());
                for (p, w) in prev.iter().zip(&b.bits) {
                    proptest::prop_assert_eq!(p & !w, 0);
                }
                prev = b.bits.clone();
            }
        }
    }
}
