//! TEA, XTEA and corrected block TEA (XXTEA) over 64-bit blocks.
//!
//! Blocks and keys are packed as big-endian 32-bit words.

use super::{be_words, put_be_words, BlockCipher};

const DELTA: u32 = 0x9E37_79B9;

/// Key-schedule constant shared by the TEA family, `floor((sqrt(5) - 1) * 2^31)`.
pub const fn tea_delta() -> u32 {
    DELTA
}

/// Words per block; the block is fixed at 64 bits.
const XXTEA_WORDS: usize = 2;
/// Full cycles for an n-word block: `6 + 52 / n`.
pub(crate) const XXTEA_CYCLES: usize = 6 + 52 / XXTEA_WORDS;

/// Running sums `r * delta` for every cycle, precomputed for the optimized variant.
static XXTEA_SUMS: [u32; XXTEA_CYCLES] = {
    let mut t = [0u32; XXTEA_CYCLES];
    let mut i = 0;
    while i < XXTEA_CYCLES {
        t[i] = DELTA.wrapping_mul(i as u32 + 1);
        i += 1;
    }
    t
};
pub(crate) const XXTEA_OPT_TABLE_BYTES: usize = XXTEA_CYCLES * 4;

pub(crate) struct Tea {
    key: [u32; 4],
}

impl Tea {
    pub fn new(key: &[u8]) -> Self {
        Tea { key: be_words(key) }
    }
}

impl BlockCipher for Tea {
    fn encrypt(&self, block: &mut [u8]) {
        let [mut y, mut z] = be_words::<2>(block);
        let k = &self.key;
        let mut sum = 0u32;
        for _ in 0..32 {
            sum = sum.wrapping_add(DELTA);
            y = y.wrapping_add((z << 4).wrapping_add(k[0]) ^ z.wrapping_add(sum) ^ (z >> 5).wrapping_add(k[1]));
            z = z.wrapping_add((y << 4).wrapping_add(k[2]) ^ y.wrapping_add(sum) ^ (y >> 5).wrapping_add(k[3]));
        }
        put_be_words(&[y, z], block);
    }

    fn decrypt(&self, block: &mut [u8]) {
        let [mut y, mut z] = be_words::<2>(block);
        let k = &self.key;
        let mut sum = DELTA.wrapping_mul(32);
        for _ in 0..32 {
            z = z.wrapping_sub((y << 4).wrapping_add(k[2]) ^ y.wrapping_add(sum) ^ (y >> 5).wrapping_add(k[3]));
            y = y.wrapping_sub((z << 4).wrapping_add(k[0]) ^ z.wrapping_add(sum) ^ (z >> 5).wrapping_add(k[1]));
            sum = sum.wrapping_sub(DELTA);
        }
        put_be_words(&[y, z], block);
    }
}

pub(crate) struct Xtea {
    key: [u32; 4],
}

impl Xtea {
    pub fn new(key: &[u8]) -> Self {
        Xtea { key: be_words(key) }
    }
}

impl BlockCipher for Xtea {
    fn encrypt(&self, block: &mut [u8]) {
        let [mut y, mut z] = be_words::<2>(block);
        let k = &self.key;
        let mut sum = 0u32;
        for _ in 0..32 {
            y = y.wrapping_add(((z << 4) ^ (z >> 5)).wrapping_add(z) ^ sum.wrapping_add(k[(sum & 3) as usize]));
            sum = sum.wrapping_add(DELTA);
            z = z.wrapping_add(((y << 4) ^ (y >> 5)).wrapping_add(y) ^ sum.wrapping_add(k[((sum >> 11) & 3) as usize]));
        }
        put_be_words(&[y, z], block);
    }

    fn decrypt(&self, block: &mut [u8]) {
        let [mut y, mut z] = be_words::<2>(block);
        let k = &self.key;
        let mut sum = DELTA.wrapping_mul(32);
        for _ in 0..32 {
            z = z.wrapping_sub(((y << 4) ^ (y >> 5)).wrapping_add(y) ^ sum.wrapping_add(k[((sum >> 11) & 3) as usize]));
            sum = sum.wrapping_sub(DELTA);
            y = y.wrapping_sub(((z << 4) ^ (z >> 5)).wrapping_add(z) ^ sum.wrapping_add(k[(sum & 3) as usize]));
        }
        put_be_words(&[y, z], block);
    }
}

#[inline(always)]
fn mx(sum: u32, y: u32, z: u32, key_word: u32) -> u32 {
    (((z >> 5) ^ (y << 2)).wrapping_add((y >> 3) ^ (z << 4))) ^ ((sum ^ y).wrapping_add(key_word ^ z))
}

/// Corrected block TEA, written over an arbitrary word slice but only ever
/// driven with two-word blocks.
pub(crate) struct Xxtea {
    key: [u32; 4],
}

impl Xxtea {
    pub fn new(key: &[u8]) -> Self {
        Xxtea { key: be_words(key) }
    }

    fn encrypt_words(&self, v: &mut [u32]) {
        let n = v.len();
        let k = &self.key;
        let mut z = v[n - 1];
        let mut sum = 0u32;
        for _ in 0..(6 + 52 / n) {
            sum = sum.wrapping_add(DELTA);
            let e = ((sum >> 2) & 3) as usize;
            for p in 0..n {
                let y = v[(p + 1) % n];
                v[p] = v[p].wrapping_add(mx(sum, y, z, k[(p & 3) ^ e]));
                z = v[p];
            }
        }
    }

    fn decrypt_words(&self, v: &mut [u32]) {
        let n = v.len();
        let k = &self.key;
        let rounds = 6 + 52 / n;
        let mut sum = DELTA.wrapping_mul(rounds as u32);
        let mut y = v[0];
        for _ in 0..rounds {
            let e = ((sum >> 2) & 3) as usize;
            for p in (0..n).rev() {
                let z = v[(p + n - 1) % n];
                v[p] = v[p].wrapping_sub(mx(sum, y, z, k[(p & 3) ^ e]));
                y = v[p];
            }
            sum = sum.wrapping_sub(DELTA);
        }
    }
}

impl BlockCipher for Xxtea {
    fn encrypt(&self, block: &mut [u8]) {
        let mut v = be_words::<XXTEA_WORDS>(block);
        self.encrypt_words(&mut v);
        put_be_words(&v, block);
    }

    fn decrypt(&self, block: &mut [u8]) {
        let mut v = be_words::<XXTEA_WORDS>(block);
        self.decrypt_words(&mut v);
        put_be_words(&v, block);
    }
}

/// XXTEA with the per-cycle sums taken from a static table and the key word
/// selection for each (cycle, position) resolved at key setup.
pub(crate) struct XxteaOpt {
    round_keys: [[u32; XXTEA_WORDS]; XXTEA_CYCLES],
}

impl XxteaOpt {
    pub fn new(key: &[u8]) -> Self {
        let k: [u32; 4] = be_words(key);
        let mut round_keys = [[0u32; XXTEA_WORDS]; XXTEA_CYCLES];
        for (rk, &sum) in round_keys.iter_mut().zip(XXTEA_SUMS.iter()) {
            let e = ((sum >> 2) & 3) as usize;
            rk[0] = k[e];
            rk[1] = k[1 ^ e];
        }
        XxteaOpt { round_keys }
    }
}

impl BlockCipher for XxteaOpt {
    fn encrypt(&self, block: &mut [u8]) {
        let [mut v0, mut v1] = be_words::<2>(block);
        for (rk, &sum) in self.round_keys.iter().zip(XXTEA_SUMS.iter()) {
            v0 = v0.wrapping_add(mx(sum, v1, v1, rk[0]));
            v1 = v1.wrapping_add(mx(sum, v0, v0, rk[1]));
        }
        put_be_words(&[v0, v1], block);
    }

    fn decrypt(&self, block: &mut [u8]) {
        let [mut v0, mut v1] = be_words::<2>(block);
        for (rk, &sum) in self.round_keys.iter().zip(XXTEA_SUMS.iter()).rev() {
            v1 = v1.wrapping_sub(mx(sum, v0, v0, rk[1]));
            v0 = v0.wrapping_sub(mx(sum, v1, v1, rk[0]));
        }
        put_be_words(&[v0, v1], block);
    }
}
