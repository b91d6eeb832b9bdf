//! Anti-replay state: windowed per-neighbor counters, per-neighbor SHA-1
//! digest rings and a Bloom filter over SRC‖CTR tags.

pub mod analytics;
mod bloom;
mod counter;
mod digest;

pub use analytics::{
    fp_rate, fp_rate_exponential, fp_rate_saturated, replay_state_bytes, FalsePositiveModel, StateScope,
};
pub use bloom::{BloomState, DEFAULT_CAPACITY, DEFAULT_M};
pub use counter::{NeighborWindowTable, COUNTER_BYTES, DEFAULT_COUNTER_NEIGHBORS, DEFAULT_WINDOW};
pub use digest::{DigestSet, DEFAULT_DIGEST_NEIGHBORS};

use crate::error::{Error, Result};
use crate::hashes::HashFamily;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Freshness {
    Fresh,
    Replayed,
}

impl Freshness {
    pub fn is_fresh(self) -> bool {
        self == Freshness::Fresh
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReplayScheme {
    Counter,
    Digest,
    Bloom,
}

impl ReplayScheme {
    pub const ALL: [ReplayScheme; 3] = [ReplayScheme::Counter, ReplayScheme::Digest, ReplayScheme::Bloom];

    pub fn as_str(self) -> &'static str {
        match self {
            ReplayScheme::Counter => "counter",
            ReplayScheme::Digest => "digest",
            ReplayScheme::Bloom => "bloom",
        }
    }
}

impl fmt::Display for ReplayScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReplayScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ReplayScheme::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

/// Tunables shared by the three schemes. Fields that do not apply to a
/// scheme are ignored by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayConfig {
    pub window: usize,
    pub max_neighbors: Option<usize>,
    pub m: usize,
    pub k: usize,
    pub capacity: usize,
}

impl Default for ReplayConfig {
    fn default() -> Self {
        ReplayConfig {
            window: DEFAULT_WINDOW,
            max_neighbors: None,
            m: DEFAULT_M,
            k: 8,
            capacity: DEFAULT_CAPACITY,
        }
    }
}

/// Replay state owned by one receiving node.
#[derive(Debug, Clone)]
pub enum ReplayState {
    Counter(NeighborWindowTable),
    Digest(DigestSet),
    Bloom(BloomState),
}

impl ReplayState {
    pub fn new(scheme: ReplayScheme, cfg: &ReplayConfig) -> Result<Self> {
        Ok(match scheme {
            ReplayScheme::Counter => ReplayState::Counter(NeighborWindowTable::new(
                cfg.window,
                cfg.max_neighbors.unwrap_or(DEFAULT_COUNTER_NEIGHBORS),
            )?),
            ReplayScheme::Digest => ReplayState::Digest(DigestSet::new(
                cfg.window,
                cfg.max_neighbors.unwrap_or(DEFAULT_DIGEST_NEIGHBORS),
            )?),
            ReplayScheme::Bloom => ReplayState::Bloom(BloomState::new(cfg.m, HashFamily::first(cfg.k)?, cfg.capacity)?),
        })
    }

    pub fn scheme(&self) -> ReplayScheme {
        match self {
            ReplayState::Counter(_) => ReplayScheme::Counter,
            ReplayState::Digest(_) => ReplayScheme::Digest,
            ReplayState::Bloom(_) => ReplayScheme::Bloom,
        }
    }

    /// Checks one received frame and records it when fresh. The counter
    /// scheme reads `src`/`ctr`, the digest scheme hashes `frame_bytes` and
    /// the Bloom filter uses the SRC‖CTR tag.
    pub fn check(&mut self, src: u16, ctr: u16, frame_bytes: &[u8]) -> Result<Freshness> {
        match self {
            ReplayState::Counter(t) => t.check(src, ctr),
            ReplayState::Digest(d) => d.check(src, frame_bytes),
            ReplayState::Bloom(b) => Ok(b.check_insert(&bloom_tag(src, ctr))),
        }
    }

    /// Bytes of replay state currently held.
    pub fn state_bytes(&self) -> usize {
        match self {
            ReplayState::Counter(t) => t.state_bytes(),
            ReplayState::Digest(d) => d.state_bytes(),
            ReplayState::Bloom(b) => b.state_bytes(),
        }
    }
}

/// Freshness tag fed to the Bloom filter: SRC‖CTR read as a big-endian
/// word and passed through the (bijective) murmur3 finalizer. Several of the
/// string hashes collapse runs of consecutive counters onto the same value,
/// so the raw word would make tags within one epoch share cells.
pub fn bloom_tag(src: u16, ctr: u16) -> [u8; 4] {
    bloom::finalize((src as u32) << 16 | ctr as u32).to_be_bytes()
}
