//! SHA-1 and the general-purpose string hashes used as Bloom addressers.

use crate::error::{Error, Result};
use sha1::{Digest, Sha1};
use std::fmt;

pub const SHA1_LEN: usize = 20;

pub fn sha1(data: &[u8]) -> [u8; SHA1_LEN] {
    Sha1::digest(data).into()
}

/// One of the classic general-purpose 32-bit string hashes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StringHash {
    Rs,
    Js,
    Pjw,
    Elf,
    Bkdr,
    Sdbm,
    Djb,
    Dek,
    Ap,
}

impl StringHash {
    pub fn name(self) -> &'static str {
        match self {
            StringHash::Rs => "RSHash",
            StringHash::Js => "JSHash",
            StringHash::Pjw => "PJWHash",
            StringHash::Elf => "ELFHash",
            StringHash::Bkdr => "BKDRHash",
            StringHash::Sdbm => "SDBMHash",
            StringHash::Djb => "DJBHash",
            StringHash::Dek => "DEKHash",
            StringHash::Ap => "APHash",
        }
    }

    pub fn hash(self, data: &[u8]) -> u32 {
        match self {
            StringHash::Rs => {
                let (mut a, b) = (63689u32, 378551u32);
                data.iter().fold(0u32, |h, &c| {
                    let h = h.wrapping_mul(a).wrapping_add(c as u32);
                    a = a.wrapping_mul(b);
                    h
                })
            }
            StringHash::Js => data.iter().fold(1315423911u32, |h, &c| {
                h ^ (h << 5).wrapping_add(c as u32).wrapping_add(h >> 2)
            }),
            StringHash::Pjw => {
                const HIGH: u32 = 0xF000_0000;
                data.iter().fold(0u32, |h, &c| {
                    let h = (h << 4).wrapping_add(c as u32);
                    match h & HIGH {
                        0 => h,
                        test => (h ^ (test >> 24)) & !HIGH,
                    }
                })
            }
            StringHash::Elf => data.iter().fold(0u32, |h, &c| {
                let mut h = (h << 4).wrapping_add(c as u32);
                let x = h & 0xF000_0000;
                if x != 0 {
                    h ^= x >> 24;
                }
                h & !x
            }),
            StringHash::Bkdr => data
                .iter()
                .fold(0u32, |h, &c| h.wrapping_mul(131).wrapping_add(c as u32)),
            StringHash::Sdbm => data.iter().fold(0u32, |h, &c| {
                (c as u32).wrapping_add(h << 6).wrapping_add(h << 16).wrapping_sub(h)
            }),
            StringHash::Djb => data
                .iter()
                .fold(5381u32, |h, &c| (h << 5).wrapping_add(h).wrapping_add(c as u32)),
            StringHash::Dek => data
                .iter()
                .fold(data.len() as u32, |h, &c| ((h << 5) ^ (h >> 27)) ^ c as u32),
            StringHash::Ap => data.iter().enumerate().fold(0xAAAA_AAAAu32, |h, (i, &c)| {
                if i & 1 == 0 {
                    h ^ ((h << 7) ^ (c as u32).wrapping_mul(h >> 3))
                } else {
                    h ^ !((h << 11).wrapping_add(c as u32 ^ (h >> 5)))
                }
            }),
        }
    }
}

impl fmt::Display for StringHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered family of k hash functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFamily {
    members: Vec<StringHash>,
}

impl HashFamily {
    /// The eight-member Bloom family. ELF is left out: on 32-bit words it is
    /// the same function as PJW, so AP takes the eighth slot.
    pub fn standard() -> Self {
        HashFamily {
            members: vec![
                StringHash::Rs,
                StringHash::Js,
                StringHash::Pjw,
                StringHash::Bkdr,
                StringHash::Sdbm,
                StringHash::Djb,
                StringHash::Dek,
                StringHash::Ap,
            ],
        }
    }

    /// The first `k` members of [`HashFamily::standard`].
    pub fn first(k: usize) -> Result<Self> {
        let mut f = Self::standard();
        if k == 0 || k > f.members.len() {
            return Err(Error::HashIndex {
                index: k,
                k: f.members.len(),
            });
        }
        f.members.truncate(k);
        Ok(f)
    }

    pub fn from_members(members: Vec<StringHash>) -> Self {
        HashFamily { members }
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[StringHash] {
        &self.members
    }

    pub fn hash(&self, index: usize, tag: &[u8]) -> Result<u32> {
        self.members
            .get(index)
            .map(|h| h.hash(tag))
            .ok_or(Error::HashIndex { index, k: self.k() })
    }

    pub fn hashes<'a>(&'a self, tag: &'a [u8]) -> impl Iterator<Item = u32> + 'a {
        self.members.iter().map(move |h| h.hash(tag))
    }
}

impl Default for HashFamily {
    fn default() -> Self {
        Self::standard()
    }
}

/// Value of the `index`-th family member on `tag`.
pub fn universal_hash(family: &HashFamily, index: usize, tag: &[u8]) -> Result<u32> {
    family.hash(index, tag)
}
