//! RC6-32/20/16 with little-endian word packing.

use super::BlockCipher;

const ROUNDS: usize = 20;
const SCHEDULE: usize = 2 * ROUNDS + 4;
const P32: u32 = 0xB7E1_5163;
const Q32: u32 = 0x9E37_79B9;

pub(crate) struct Rc6 {
    s: [u32; SCHEDULE],
}

impl Rc6 {
    pub fn new(key: &[u8]) -> Self {
        let c = key.len().div_ceil(4).max(1);
        let mut l = vec![0u32; c];
        for (i, &b) in key.iter().enumerate().rev() {
            l[i / 4] = (l[i / 4] << 8).wrapping_add(b as u32);
        }
        let mut s = [0u32; SCHEDULE];
        s[0] = P32;
        for i in 1..SCHEDULE {
            s[i] = s[i - 1].wrapping_add(Q32);
        }
        let (mut a, mut b) = (0u32, 0u32);
        let (mut i, mut j) = (0usize, 0usize);
        for _ in 0..3 * SCHEDULE.max(c) {
            a = s[i].wrapping_add(a).wrapping_add(b).rotate_left(3);
            s[i] = a;
            b = l[j].wrapping_add(a).wrapping_add(b).rotate_left(a.wrapping_add(b) & 31);
            l[j] = b;
            i = (i + 1) % SCHEDULE;
            j = (j + 1) % c;
        }
        Rc6 { s }
    }
}

fn load(block: &[u8]) -> [u32; 4] {
    let mut w = [0u32; 4];
    for (i, c) in block.chunks_exact(4).enumerate() {
        w[i] = u32::from_le_bytes([c[0], c[1], c[2], c[3]]);
    }
    w
}

fn store(w: [u32; 4], block: &mut [u8]) {
    for (i, c) in block.chunks_exact_mut(4).enumerate() {
        c.copy_from_slice(&w[i].to_le_bytes());
    }
}

#[inline(always)]
fn f(x: u32) -> u32 {
    x.wrapping_mul(x.wrapping_mul(2).wrapping_add(1)).rotate_left(5)
}

impl BlockCipher for Rc6 {
    fn encrypt(&self, block: &mut [u8]) {
        let s = &self.s;
        let [mut a, mut b, mut c, mut d] = load(block);
        b = b.wrapping_add(s[0]);
        d = d.wrapping_add(s[1]);
        for r in 1..=ROUNDS {
            let t = f(b);
            let u = f(d);
            a = (a ^ t).rotate_left(u & 31).wrapping_add(s[2 * r]);
            c = (c ^ u).rotate_left(t & 31).wrapping_add(s[2 * r + 1]);
            (a, b, c, d) = (b, c, d, a);
        }
        a = a.wrapping_add(s[2 * ROUNDS + 2]);
        c = c.wrapping_add(s[2 * ROUNDS + 3]);
        store([a, b, c, d], block);
    }

    fn decrypt(&self, block: &mut [u8]) {
        let s = &self.s;
        let [mut a, mut b, mut c, mut d] = load(block);
        c = c.wrapping_sub(s[2 * ROUNDS + 3]);
        a = a.wrapping_sub(s[2 * ROUNDS + 2]);
        for r in (1..=ROUNDS).rev() {
            (a, b, c, d) = (d, a, b, c);
            let u = f(d);
            let t = f(b);
            c = c.wrapping_sub(s[2 * r + 1]).rotate_right(t & 31) ^ u;
            a = a.wrapping_sub(s[2 * r]).rotate_right(u & 31) ^ t;
        }
        d = d.wrapping_sub(s[1]);
        b = b.wrapping_sub(s[0]);
        store([a, b, c, d], block);
    }
}
