use super::Freshness;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub const DEFAULT_WINDOW: usize = 8;
pub const DEFAULT_COUNTER_NEIGHBORS: usize = 150;
/// Wire size of one stored counter value.
pub const COUNTER_BYTES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Entry {
    last: u16,
    /// Bit i set means `last - i` has been seen.
    seen: u64,
}

/// Per-neighbor last counter plus a sliding bitmap of recently seen values.
///
/// A window of 1 is the plain "strictly greater than the last count" rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborWindowTable {
    entries: BTreeMap<u16, Entry>,
    window: usize,
    max_neighbors: usize,
}

impl NeighborWindowTable {
    pub fn new(window: usize, max_neighbors: usize) -> Result<Self> {
        if !(1..=64).contains(&window) {
            return Err(Error::Config(format!("counter window must be 1..=64, got {window}")));
        }
        if max_neighbors == 0 {
            return Err(Error::NonPositive("max_neighbors"));
        }
        Ok(NeighborWindowTable {
            entries: BTreeMap::new(),
            window,
            max_neighbors,
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn neighbors(&self) -> usize {
        self.entries.len()
    }

    pub fn last_count(&self, node: u16) -> Option<u16> {
        self.entries.get(&node).map(|e| e.last)
    }

    pub fn check(&mut self, node: u16, counter: u16) -> Result<Freshness> {
        let len = self.entries.len();
        let window = self.window;
        let e = match self.entries.get_mut(&node) {
            Some(e) => e,
            None => {
                if len >= self.max_neighbors {
                    return Err(Error::TableFull(self.max_neighbors));
                }
                self.entries.insert(node, Entry { last: counter, seen: 1 });
                return Ok(Freshness::Fresh);
            }
        };
        if counter > e.last {
            let shift = (counter - e.last) as u32;
            e.seen = if shift >= 64 { 0 } else { e.seen << shift } | 1;
            e.last = counter;
            return Ok(Freshness::Fresh);
        }
        let age = (e.last - counter) as usize;
        if age >= window || e.seen & (1 << age) != 0 {
            return Ok(Freshness::Replayed);
        }
        e.seen |= 1 << age;
        Ok(Freshness::Fresh)
    }

    pub fn state_bytes(&self) -> usize {
        self.entries.len() * (COUNTER_BYTES + self.window.div_ceil(8))
    }
}
