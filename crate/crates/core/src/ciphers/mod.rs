//! Block ciphers behind one keyed-cipher abstraction.
//!
//! Every cipher reports the bytes of static precomputed tables it relies on,
//! so storage trade-offs (AES speed vs. size layout, optimized XXTEA) can be
//! compared without measuring a build.

mod aes;
mod rc6;
mod skipjack;
mod tea;

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

pub use tea::tea_delta;

/// Registry of available ciphers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CipherName {
    Skipjack,
    Tea,
    Xtea,
    Xxtea,
    XxteaOpt,
    Rc6,
    AesSpeed,
    AesSize,
}

impl CipherName {
    pub const ALL: [CipherName; 8] = [
        CipherName::Skipjack,
        CipherName::Tea,
        CipherName::Xtea,
        CipherName::Xxtea,
        CipherName::XxteaOpt,
        CipherName::Rc6,
        CipherName::AesSpeed,
        CipherName::AesSize,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CipherName::Skipjack => "skipjack",
            CipherName::Tea => "tea",
            CipherName::Xtea => "xtea",
            CipherName::Xxtea => "xxtea",
            CipherName::XxteaOpt => "xxtea_opt",
            CipherName::Rc6 => "rc6",
            CipherName::AesSpeed => "aes_speed",
            CipherName::AesSize => "aes_size",
        }
    }

    pub fn spec(self) -> CipherSpec {
        let (block_bits, key_bits, rounds, table_bytes) = match self {
            CipherName::Skipjack => (64, 80, 32, skipjack::TABLE_BYTES),
            CipherName::Tea => (64, 128, 64, 0),
            CipherName::Xtea => (64, 128, 64, 0),
            CipherName::Xxtea => (64, 128, tea::XXTEA_CYCLES as u32, 0),
            CipherName::XxteaOpt => (64, 128, tea::XXTEA_CYCLES as u32, tea::XXTEA_OPT_TABLE_BYTES),
            CipherName::Rc6 => (128, 128, 20, 0),
            CipherName::AesSpeed => (128, 128, 10, aes::SPEED_TABLE_BYTES),
            CipherName::AesSize => (128, 128, 10, aes::SIZE_TABLE_BYTES),
        };
        CipherSpec {
            name: self,
            block_bits,
            key_bits,
            rounds,
            table_bytes,
        }
    }
}

impl fmt::Display for CipherName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CipherName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CipherName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCipher(s.to_string()))
    }
}

/// Static description of a cipher.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CipherSpec {
    pub name: CipherName,
    pub block_bits: u32,
    pub key_bits: u32,
    pub rounds: u32,
    /// Bytes of static precomputed tables (S-boxes, T-tables, round constants).
    pub table_bytes: usize,
}

impl CipherSpec {
    pub fn block_len(&self) -> usize {
        self.block_bits as usize / 8
    }

    pub fn key_len(&self) -> usize {
        self.key_bits as usize / 8
    }
}

/// In-place block permutation over a correctly sized buffer.
pub(crate) trait BlockCipher: Send + Sync {
    fn encrypt(&self, block: &mut [u8]);
    fn decrypt(&self, block: &mut [u8]);
}

/// A cipher instantiated with expanded key material. Immutable once built.
pub struct KeyedCipher {
    spec: CipherSpec,
    engine: Box<dyn BlockCipher>,
}

impl fmt::Debug for KeyedCipher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeyedCipher")
            .field("spec", &self.spec)
            .finish_non_exhaustive()
    }
}

impl KeyedCipher {
    pub fn spec(&self) -> &CipherSpec {
        &self.spec
    }

    pub fn name(&self) -> CipherName {
        self.spec.name
    }

    pub fn block_len(&self) -> usize {
        self.spec.block_len()
    }

    pub fn encrypt_block(&self, block: &[u8]) -> Result<Vec<u8>> {
        let mut out = block.to_vec();
        self.encrypt_in_place(&mut out)?;
        Ok(out)
    }

    pub fn decrypt_block(&self, block: &[u8]) -> Result<Vec<u8>> {
        let mut out = block.to_vec();
        self.decrypt_in_place(&mut out)?;
        Ok(out)
    }

    pub fn encrypt_in_place(&self, block: &mut [u8]) -> Result<()> {
        self.check_len(block.len())?;
        self.engine.encrypt(block);
        Ok(())
    }

    pub fn decrypt_in_place(&self, block: &mut [u8]) -> Result<()> {
        self.check_len(block.len())?;
        self.engine.decrypt(block);
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.block_len() {
            return Err(Error::BlockLength {
                expected: self.block_len(),
                actual: len,
            });
        }
        Ok(())
    }
}

/// Builds a keyed cipher from a registry name and raw key bytes.
pub fn make_cipher(name: &str, key: &[u8]) -> Result<KeyedCipher> {
    let name: CipherName = name.parse()?;
    make_named(name, key)
}

pub fn make_named(name: CipherName, key: &[u8]) -> Result<KeyedCipher> {
    let spec = name.spec();
    if key.len() != spec.key_len() {
        return Err(Error::KeyLength {
            cipher: name.as_str(),
            expected: spec.key_len(),
            actual: key.len(),
        });
    }
    let engine: Box<dyn BlockCipher> = match name {
        CipherName::Skipjack => Box::new(skipjack::Skipjack::new(key)),
        CipherName::Tea => Box::new(tea::Tea::new(key)),
        CipherName::Xtea => Box::new(tea::Xtea::new(key)),
        CipherName::Xxtea => Box::new(tea::Xxtea::new(key)),
        CipherName::XxteaOpt => Box::new(tea::XxteaOpt::new(key)),
        CipherName::Rc6 => Box::new(rc6::Rc6::new(key)),
        CipherName::AesSpeed => Box::new(aes::AesSpeed::new(key)),
        CipherName::AesSize => Box::new(aes::AesSize::new(key)),
    };
    Ok(KeyedCipher { spec, engine })
}

/// Year until which a `key_bits` symmetric key is considered safe,
/// `1982 + (k - 56) * 30 / 23` rounded to the nearest year.
pub fn key_horizon(key_bits: u32) -> Result<i64> {
    if key_bits < 56 {
        return Err(Error::KeyTooShort(key_bits));
    }
    let num = (key_bits as i64 - 56) * 30;
    // round half up: floor((2 * num + 23) / 46)
    Ok(1982 + (2 * num + 23) / 46)
}

pub(crate) fn be_words<const N: usize>(bytes: &[u8]) -> [u32; N] {
    let mut out = [0u32; N];
    for (w, chunk) in out.iter_mut().zip(bytes.chunks_exact(4)) {
        *w = u32::from_be_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
    }
    out
}

pub(crate) fn put_be_words(words: &[u32], out: &mut [u8]) {
    for (w, chunk) in words.iter().zip(out.chunks_exact_mut(4)) {
        chunk.copy_from_slice(&w.to_be_bytes());
    }
}
