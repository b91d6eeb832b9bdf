//! CBC encryption and the length-prefixed CBC-MAC.

use super::{block_count, check_tag_len, xor_into, CallLedger, Counted};
use crate::ciphers::KeyedCipher;
use crate::error::{Error, Result};

fn check_iv(c: &KeyedCipher, iv: &[u8]) -> Result<()> {
    if iv.len() != c.block_len() {
        return Err(Error::NonceLength(iv.len()));
    }
    Ok(())
}

/// `C_i = E(P_i ^ C_{i-1})`, `C_0 = iv`. The final partial block is padded
/// with zero bytes, so the ciphertext is always block aligned.
pub fn cbc_encrypt(c: &KeyedCipher, iv: &[u8], plaintext: &[u8]) -> Result<(Vec<u8>, CallLedger)> {
    check_iv(c, iv)?;
    if plaintext.is_empty() {
        return Err(Error::EmptyInput);
    }
    let k = Counted::new(c);
    let b = c.block_len();
    let n = block_count(plaintext.len(), b);
    let mut out = vec![0u8; n * b];
    out[..plaintext.len()].copy_from_slice(plaintext);
    let mut prev = iv.to_vec();
    for block in out.chunks_exact_mut(b) {
        xor_into(block, &prev);
        k.encrypt(block);
        prev.copy_from_slice(block);
    }
    Ok((out, k.ledger("cbc", n)))
}

/// `P_i = D(C_i) ^ C_{i-1}`. Returns the zero-padded plaintext; the caller
/// trims it to the authenticated length.
pub fn cbc_decrypt(c: &KeyedCipher, iv: &[u8], ciphertext: &[u8]) -> Result<(Vec<u8>, CallLedger)> {
    check_iv(c, iv)?;
    let b = c.block_len();
    if ciphertext.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !ciphertext.len().is_multiple_of(b) {
        return Err(Error::Unaligned {
            len: ciphertext.len(),
            block: b,
        });
    }
    let k = Counted::new(c);
    let mut out = ciphertext.to_vec();
    let mut prev = iv.to_vec();
    for block in out.chunks_exact_mut(b) {
        let this = block.to_vec();
        k.decrypt(block);
        xor_into(block, &prev);
        prev = this;
    }
    Ok((out, k.ledger("cbc", ciphertext.len() / b)))
}

/// CBC-MAC with a zero IV over `len_block || message`, truncated to
/// `tag_len` bytes. The leading length block makes the message set
/// prefix-free and costs one extra cipher call.
pub fn cbc_mac(c: &KeyedCipher, message: &[u8], tag_len: usize) -> Result<(Vec<u8>, CallLedger)> {
    check_tag_len(tag_len)?;
    if message.is_empty() {
        return Err(Error::EmptyInput);
    }
    let k = Counted::new(c);
    let b = c.block_len();
    let mut state = vec![0u8; b];
    state[b - 8..].copy_from_slice(&(message.len() as u64).to_be_bytes());
    k.encrypt(&mut state);
    for chunk in message.chunks(b) {
        xor_into(&mut state, chunk);
        k.encrypt(&mut state);
    }
    state.truncate(tag_len);
    Ok((state, k.ledger("cbc_mac", block_count(message.len(), b))))
}

/// Conventional two-pass composition: CBC encryption under `enc`, then
/// CBC-MAC over the ciphertext under `mac`.
pub fn cbc_then_mac(
    enc: &KeyedCipher,
    mac: &KeyedCipher,
    iv: &[u8],
    plaintext: &[u8],
    tag_len: usize,
) -> Result<(Vec<u8>, Vec<u8>, CallLedger)> {
    check_tag_len(tag_len)?;
    let (ct, l1) = cbc_encrypt(enc, iv, plaintext)?;
    let (tag, l2) = cbc_mac(mac, &ct, tag_len)?;
    let ledger = CallLedger {
        mode: "cbc+cbc_mac",
        cipher_calls: l1.cipher_calls + l2.cipher_calls,
        decrypt_calls: 0,
        blocks_processed: l1.blocks_processed,
    };
    Ok((ct, tag, ledger))
}
