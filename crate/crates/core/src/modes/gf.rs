//! Doubling in GF(2^64) and GF(2^128), big-endian bit order.

/// Multiplies the block by `x` modulo the standard reduction polynomial
/// (x^64 + x^4 + x^3 + x + 1 or x^128 + x^7 + x^2 + x + 1).
pub(crate) fn double(block: &mut [u8]) {
    let poly = match block.len() {
        8 => 0x1b,
        16 => 0x87,
        n => unreachable!("no doubling for {n}-byte blocks"),
    };
    let carry = block[0] >> 7;
    for i in 0..block.len() - 1 {
        block[i] = (block[i] << 1) | (block[i + 1] >> 7);
    }
    let last = block.len() - 1;
    block[last] = (block[last] << 1) ^ (poly * carry);
}
