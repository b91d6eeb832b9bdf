use super::Freshness;
use crate::error::{Error, Result};
use crate::hashes::{sha1, SHA1_LEN};
use std::collections::{BTreeMap, VecDeque};

pub const DEFAULT_DIGEST_NEIGHBORS: usize = 7;

/// Per-neighbor ring of the most recent SHA-1 digests of accepted frames.
/// A duplicate older than the ring is no longer recognised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigestSet {
    rings: BTreeMap<u16, VecDeque<[u8; SHA1_LEN]>>,
    window: usize,
    max_neighbors: usize,
}

impl DigestSet {
    pub fn new(window: usize, max_neighbors: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::NonPositive("window"));
        }
        if max_neighbors == 0 {
            return Err(Error::NonPositive("max_neighbors"));
        }
        Ok(DigestSet {
            rings: BTreeMap::new(),
            window,
            max_neighbors,
        })
    }

    pub fn check(&mut self, node: u16, frame_bytes: &[u8]) -> Result<Freshness> {
        if !self.rings.contains_key(&node) && self.rings.len() >= self.max_neighbors {
            return Err(Error::TableFull(self.max_neighbors));
        }
        let d = sha1(frame_bytes);
        let ring = self.rings.entry(node).or_default();
        if ring.contains(&d) {
            return Ok(Freshness::Replayed);
        }
        if ring.len() == self.window {
            ring.pop_front();
        }
        ring.push_back(d);
        Ok(Freshness::Fresh)
    }

    pub fn ring_len(&self, node: u16) -> usize {
        self.rings.get(&node).map_or(0, VecDeque::len)
    }

    pub fn state_bytes(&self) -> usize {
        self.rings.len() * self.window * SHA1_LEN
    }
}
