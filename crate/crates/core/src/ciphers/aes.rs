//! AES-128 in two table layouts.
//!
//! The speed layout keeps one 256-entry 32-bit forward round table, one
//! 256-entry 32-bit inverse round table and the 256-byte inverse S-box; the
//! other three column rotations are derived with `rotate_right`. The size
//! layout keeps only the forward and inverse S-boxes and computes MixColumns
//! with `xtime` chains. Both produce the same permutation.

use super::BlockCipher;

const ROUNDS: usize = 10;
const RK_WORDS: usize = 4 * (ROUNDS + 1);

const fn xtime(x: u8) -> u8 {
    (x << 1) ^ if x & 0x80 != 0 { 0x1b } else { 0 }
}

const fn gmul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    p
}

/// Walks the multiplicative group with generator 3 so each inverse comes for free.
const fn build_sbox() -> [u8; 256] {
    let mut s = [0u8; 256];
    let mut p: u8 = 1;
    let mut q: u8 = 1;
    loop {
        p = p ^ (p << 1) ^ if p & 0x80 != 0 { 0x1b } else { 0 };
        q ^= q << 1;
        q ^= q << 2;
        q ^= q << 4;
        if q & 0x80 != 0 {
            q ^= 0x09;
        }
        let x = q ^ q.rotate_left(1) ^ q.rotate_left(2) ^ q.rotate_left(3) ^ q.rotate_left(4);
        s[p as usize] = x ^ 0x63;
        if p == 1 {
            break;
        }
    }
    s[0] = 0x63;
    s
}

const fn invert(s: &[u8; 256]) -> [u8; 256] {
    let mut inv = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        inv[s[i] as usize] = i as u8;
        i += 1;
    }
    inv
}

const fn build_te(s: &[u8; 256]) -> [u32; 256] {
    let mut t = [0u32; 256];
    let mut i = 0;
    while i < 256 {
        let v = s[i];
        let v2 = xtime(v);
        t[i] = (v2 as u32) << 24 | (v as u32) << 16 | (v as u32) << 8 | (v2 ^ v) as u32;
        i += 1;
    }
    t
}

const fn build_td(inv: &[u8; 256]) -> [u32; 256] {
    let mut t = [0u32; 256];
    let mut i = 0;
    while i < 256 {
        let v = inv[i];
        t[i] = (gmul(v, 14) as u32) << 24 | (gmul(v, 9) as u32) << 16 | (gmul(v, 13) as u32) << 8 | gmul(v, 11) as u32;
        i += 1;
    }
    t
}

static SBOX: [u8; 256] = build_sbox();
static INV_SBOX: [u8; 256] = invert(&build_sbox());
static TE: [u32; 256] = build_te(&build_sbox());
static TD: [u32; 256] = build_td(&invert(&build_sbox()));

pub(crate) const SPEED_TABLE_BYTES: usize = std::mem::size_of::<[u32; 256]>() * 2 + std::mem::size_of::<[u8; 256]>();
pub(crate) const SIZE_TABLE_BYTES: usize = std::mem::size_of::<[u8; 256]>() * 2;

fn rcon_iter() -> impl Iterator<Item = u8> {
    std::iter::successors(Some(1u8), |&r| Some(xtime(r)))
}

// ---------------------------------------------------------------------------
// speed layout

#[inline(always)]
fn te_sbox(x: u32) -> u32 {
    (TE[(x & 0xff) as usize] >> 16) & 0xff
}

#[inline(always)]
fn te(x: u32, rot: u32) -> u32 {
    TE[(x & 0xff) as usize].rotate_right(rot)
}

#[inline(always)]
fn td(x: u32, rot: u32) -> u32 {
    TD[(x & 0xff) as usize].rotate_right(rot)
}

fn sub_word_te(w: u32) -> u32 {
    te_sbox(w >> 24) << 24 | te_sbox(w >> 16) << 16 | te_sbox(w >> 8) << 8 | te_sbox(w)
}

fn inv_mix_word(w: u32) -> u32 {
    td(te_sbox(w >> 24), 0) ^ td(te_sbox(w >> 16), 8) ^ td(te_sbox(w >> 8), 16) ^ td(te_sbox(w), 24)
}

pub(crate) struct AesSpeed {
    ek: [u32; RK_WORDS],
    dk: [u32; RK_WORDS],
}

impl AesSpeed {
    pub fn new(key: &[u8]) -> Self {
        let mut ek = [0u32; RK_WORDS];
        for (i, c) in key.chunks_exact(4).enumerate() {
            ek[i] = u32::from_be_bytes([c[0], c[1], c[2], c[3]]);
        }
        let mut rcon = rcon_iter();
        for i in 4..RK_WORDS {
            let mut t = ek[i - 1];
            if i % 4 == 0 {
                t = sub_word_te(t.rotate_left(8)) ^ (rcon.next().unwrap_or(0) as u32) << 24;
            }
            ek[i] = ek[i - 4] ^ t;
        }
        // decryption keys in round order, middle rounds passed through InvMixColumns
        let mut dk = [0u32; RK_WORDS];
        for r in 0..=ROUNDS {
            for c in 0..4 {
                let w = ek[4 * (ROUNDS - r) + c];
                dk[4 * r + c] = if r == 0 || r == ROUNDS { w } else { inv_mix_word(w) };
            }
        }
        AesSpeed { ek, dk }
    }
}

fn load_cols(block: &[u8]) -> [u32; 4] {
    let mut s = [0u32; 4];
    for (i, c) in block.chunks_exact(4).enumerate() {
        s[i] = u32::from_be_bytes([c[0], c[1], c[2], c[3]]);
    }
    s
}

fn store_cols(s: [u32; 4], block: &mut [u8]) {
    for (i, c) in block.chunks_exact_mut(4).enumerate() {
        c.copy_from_slice(&s[i].to_be_bytes());
    }
}

impl BlockCipher for AesSpeed {
    fn encrypt(&self, block: &mut [u8]) {
        let k = &self.ek;
        let mut s = load_cols(block);
        for (c, w) in s.iter_mut().enumerate() {
            *w ^= k[c];
        }
        for r in 1..ROUNDS {
            let mut t = [0u32; 4];
            for (c, tc) in t.iter_mut().enumerate() {
                *tc = te(s[c] >> 24, 0)
                    ^ te(s[(c + 1) % 4] >> 16, 8)
                    ^ te(s[(c + 2) % 4] >> 8, 16)
                    ^ te(s[(c + 3) % 4], 24)
                    ^ k[4 * r + c];
            }
            s = t;
        }
        let mut out = [0u32; 4];
        for (c, o) in out.iter_mut().enumerate() {
            *o = (te_sbox(s[c] >> 24) << 24
                | te_sbox(s[(c + 1) % 4] >> 16) << 16
                | te_sbox(s[(c + 2) % 4] >> 8) << 8
                | te_sbox(s[(c + 3) % 4]))
                ^ k[4 * ROUNDS + c];
        }
        store_cols(out, block);
    }

    fn decrypt(&self, block: &mut [u8]) {
        let k = &self.dk;
        let mut s = load_cols(block);
        for (c, w) in s.iter_mut().enumerate() {
            *w ^= k[c];
        }
        for r in 1..ROUNDS {
            let mut t = [0u32; 4];
            for (c, tc) in t.iter_mut().enumerate() {
                *tc = td(s[c] >> 24, 0)
                    ^ td(s[(c + 3) % 4] >> 16, 8)
                    ^ td(s[(c + 2) % 4] >> 8, 16)
                    ^ td(s[(c + 1) % 4], 24)
                    ^ k[4 * r + c];
            }
            s = t;
        }
        let isb = |x: u32| INV_SBOX[(x & 0xff) as usize] as u32;
        let mut out = [0u32; 4];
        for (c, o) in out.iter_mut().enumerate() {
            *o = (isb(s[c] >> 24) << 24
                | isb(s[(c + 3) % 4] >> 16) << 16
                | isb(s[(c + 2) % 4] >> 8) << 8
                | isb(s[(c + 1) % 4]))
                ^ k[4 * ROUNDS + c];
        }
        store_cols(out, block);
    }
}

// ---------------------------------------------------------------------------
// size layout

pub(crate) struct AesSize {
    rk: [u8; 16 * (ROUNDS + 1)],
}

impl AesSize {
    pub fn new(key: &[u8]) -> Self {
        let mut rk = [0u8; 16 * (ROUNDS + 1)];
        rk[..16].copy_from_slice(key);
        let mut rcon = rcon_iter();
        for i in 4..RK_WORDS {
            let mut t = [rk[4 * i - 4], rk[4 * i - 3], rk[4 * i - 2], rk[4 * i - 1]];
            if i % 4 == 0 {
                t = [
                    SBOX[t[1] as usize] ^ rcon.next().unwrap_or(0),
                    SBOX[t[2] as usize],
                    SBOX[t[3] as usize],
                    SBOX[t[0] as usize],
                ];
            }
            for j in 0..4 {
                rk[4 * i + j] = rk[4 * i - 16 + j] ^ t[j];
            }
        }
        AesSize { rk }
    }

    fn add_round_key(&self, s: &mut [u8], round: usize) {
        for (b, k) in s.iter_mut().zip(&self.rk[16 * round..16 * round + 16]) {
            *b ^= k;
        }
    }
}

fn shift_rows(s: &mut [u8]) {
    let old: [u8; 16] = s.try_into().unwrap();
    for c in 0..4 {
        for r in 1..4 {
            s[4 * c + r] = old[4 * ((c + r) % 4) + r];
        }
    }
}

fn inv_shift_rows(s: &mut [u8]) {
    let old: [u8; 16] = s.try_into().unwrap();
    for c in 0..4 {
        for r in 1..4 {
            s[4 * ((c + r) % 4) + r] = old[4 * c + r];
        }
    }
}

fn mix_columns(s: &mut [u8]) {
    for col in s.chunks_exact_mut(4) {
        let a = [col[0], col[1], col[2], col[3]];
        let all = a[0] ^ a[1] ^ a[2] ^ a[3];
        for i in 0..4 {
            col[i] = a[i] ^ all ^ xtime(a[i] ^ a[(i + 1) % 4]);
        }
    }
}

fn inv_mix_columns(s: &mut [u8]) {
    for col in s.chunks_exact_mut(4) {
        let a = [col[0], col[1], col[2], col[3]];
        let m = |x: u8| {
            let x2 = xtime(x);
            let x4 = xtime(x2);
            let x8 = xtime(x4);
            // (9x, 11x, 13x, 14x)
            (x8 ^ x, x8 ^ x2 ^ x, x8 ^ x4 ^ x, x8 ^ x4 ^ x2)
        };
        let ms = a.map(m);
        for i in 0..4 {
            let (_, _, _, e) = ms[i];
            let (_, b, _, _) = ms[(i + 1) % 4];
            let (_, _, d, _) = ms[(i + 2) % 4];
            let (n, _, _, _) = ms[(i + 3) % 4];
            col[i] = e ^ b ^ d ^ n;
        }
    }
}

impl BlockCipher for AesSize {
    fn encrypt(&self, s: &mut [u8]) {
        self.add_round_key(s, 0);
        for r in 1..=ROUNDS {
            for b in s.iter_mut() {
                *b = SBOX[*b as usize];
            }
            shift_rows(s);
            if r != ROUNDS {
                mix_columns(s);
            }
            self.add_round_key(s, r);
        }
    }

    fn decrypt(&self, s: &mut [u8]) {
        self.add_round_key(s, ROUNDS);
        for r in (0..ROUNDS).rev() {
            inv_shift_rows(s);
            for b in s.iter_mut() {
                *b = INV_SBOX[*b as usize];
            }
            self.add_round_key(s, r);
            if r != 0 {
                inv_mix_columns(s);
            }
        }
    }
}
