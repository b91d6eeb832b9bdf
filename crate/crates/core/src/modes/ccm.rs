//! Counter mode plus CBC-MAC (CCM), 128-bit block ciphers only.

use super::{block_count, check_tag_len, ct_eq, xor_into, AeadOutput, CallLedger, Counted, Verified};
use crate::ciphers::KeyedCipher;
use crate::error::{Error, Result};

const B: usize = 16;

fn check(c: &KeyedCipher, nonce: &[u8]) -> Result<usize> {
    if c.block_len() != B {
        return Err(Error::NeedsWideBlock("ccm"));
    }
    if !(7..=13).contains(&nonce.len()) {
        return Err(Error::NonceLength(nonce.len()));
    }
    // width of the length / counter field
    Ok(15 - nonce.len())
}

fn counter_block(nonce: &[u8], q: usize, i: u64) -> [u8; B] {
    let mut ctr = [0u8; B];
    ctr[0] = (q - 1) as u8;
    ctr[1..1 + nonce.len()].copy_from_slice(nonce);
    let be = i.to_be_bytes();
    ctr[B - q..].copy_from_slice(&be[8 - q.min(8)..]);
    ctr
}

fn mac(k: &Counted<'_>, nonce: &[u8], q: usize, aad: &[u8], plaintext: &[u8], tag_len: usize) -> Result<[u8; B]> {
    if q < 8 && (plaintext.len() as u64) >> (8 * q) != 0 {
        return Err(Error::Config(format!("payload too long for a {q}-byte length field")));
    }
    let mut b0 = [0u8; B];
    b0[0] = (if aad.is_empty() { 0 } else { 0x40 }) | (((tag_len - 2) / 2) as u8) << 3 | (q - 1) as u8;
    b0[1..1 + nonce.len()].copy_from_slice(nonce);
    let len = (plaintext.len() as u64).to_be_bytes();
    b0[B - q..].copy_from_slice(&len[8 - q.min(8)..]);

    let mut y = b0;
    k.encrypt(&mut y);

    if !aad.is_empty() {
        let mut encoded = Vec::with_capacity(aad.len() + 10);
        if aad.len() < 0xFF00 {
            encoded.extend_from_slice(&(aad.len() as u16).to_be_bytes());
        } else if aad.len() as u64 <= u32::MAX as u64 {
            encoded.extend_from_slice(&[0xff, 0xfe]);
            encoded.extend_from_slice(&(aad.len() as u32).to_be_bytes());
        } else {
            encoded.extend_from_slice(&[0xff, 0xff]);
            encoded.extend_from_slice(&(aad.len() as u64).to_be_bytes());
        }
        encoded.extend_from_slice(aad);
        for chunk in encoded.chunks(B) {
            xor_into(&mut y, chunk);
            k.encrypt(&mut y);
        }
    }
    for chunk in plaintext.chunks(B) {
        xor_into(&mut y, chunk);
        k.encrypt(&mut y);
    }
    Ok(y)
}

fn ctr_xor(k: &Counted<'_>, nonce: &[u8], q: usize, data: &mut [u8]) {
    for (i, chunk) in data.chunks_mut(B).enumerate() {
        let mut s = counter_block(nonce, q, i as u64 + 1);
        k.encrypt(&mut s);
        xor_into(chunk, &s);
    }
}

fn tag_mask(k: &Counted<'_>, nonce: &[u8], q: usize) -> [u8; B] {
    let mut s0 = counter_block(nonce, q, 0);
    k.encrypt(&mut s0);
    s0
}

pub fn ccm_seal(
    c: &KeyedCipher,
    nonce: &[u8],
    aad: &[u8],
    plaintext: &[u8],
    tag_len: usize,
) -> Result<(AeadOutput, CallLedger)> {
    check_tag_len(tag_len)?;
    let q = check(c, nonce)?;
    let k = Counted::new(c);
    let mut tag = mac(&k, nonce, q, aad, plaintext, tag_len)?;
    let mut ciphertext = plaintext.to_vec();
    ctr_xor(&k, nonce, q, &mut ciphertext);
    xor_into(&mut tag, &tag_mask(&k, nonce, q));
    let ledger = k.ledger("ccm", block_count(plaintext.len(), B));
    Ok((
        AeadOutput {
            ciphertext,
            tag: tag[..tag_len].to_vec(),
        },
        ledger,
    ))
}

pub fn ccm_open(
    c: &KeyedCipher,
    nonce: &[u8],
    aad: &[u8],
    ciphertext: &[u8],
    tag: &[u8],
) -> Result<(Verified, CallLedger)> {
    check_tag_len(tag.len())?;
    let q = check(c, nonce)?;
    let k = Counted::new(c);
    let mut plaintext = ciphertext.to_vec();
    ctr_xor(&k, nonce, q, &mut plaintext);
    let mut expected = mac(&k, nonce, q, aad, &plaintext, tag.len())?;
    xor_into(&mut expected, &tag_mask(&k, nonce, q));
    let ledger = k.ledger("ccm", block_count(ciphertext.len(), B));
    let verdict = if ct_eq(&expected[..tag.len()], tag) {
        Verified::Valid(plaintext)
    } else {
        Verified::Forged
    };
    Ok((verdict, ledger))
}
