//! Single-pass authenticated encryption with per-block offsets.
//!
//! `O = E(0^b)` is computed once; block `i` uses the offset `O_i = O * x^i`
//! in GF(2^b). Full blocks are encrypted as `E(M_i ^ O_i ^ N) ^ O_i ^ N`;
//! a trailing partial block is XORed with `E(len ^ O_n ^ N)`. The tag is
//! `E(M_1 ^ ... ^ M_n ^ O_{n+1} ^ N)` truncated, with a partial final block
//! zero-padded into the checksum. An n-block message costs n + 2 calls.

use super::gf::double;
use super::{block_count, check_tag_len, ct_eq, xor_into, zero_extend, AeadOutput, CallLedger, Counted, Verified};
use crate::ciphers::KeyedCipher;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Seal,
    Open,
}

/// Runs the offset chain over `input`; returns the transformed bytes and the
/// full-width tag.
fn process(k: &Counted<'_>, nonce: &[u8], input: &[u8], dir: Direction) -> (Vec<u8>, Vec<u8>) {
    let b = k.block_len();
    let n = zero_extend(nonce, b);
    let mut offset = vec![0u8; b];
    k.encrypt(&mut offset);
    let mut checksum = vec![0u8; b];
    let mut out = Vec::with_capacity(input.len());

    for chunk in input.chunks(b) {
        double(&mut offset);
        let mut whitening = offset.clone();
        xor_into(&mut whitening, &n);
        if chunk.len() == b {
            let mut x = chunk.to_vec();
            xor_into(&mut x, &whitening);
            match dir {
                Direction::Seal => k.encrypt(&mut x),
                Direction::Open => k.decrypt(&mut x),
            }
            xor_into(&mut x, &whitening);
            let plain = if dir == Direction::Seal { chunk } else { &x[..] };
            xor_into(&mut checksum, plain);
            out.extend_from_slice(&x);
        } else {
            let mut pad = vec![0u8; b];
            pad[b - 8..].copy_from_slice(&((chunk.len() * 8) as u64).to_be_bytes());
            xor_into(&mut pad, &whitening);
            k.encrypt(&mut pad);
            let mut x = chunk.to_vec();
            xor_into(&mut x, &pad);
            let plain = if dir == Direction::Seal { chunk } else { &x[..] };
            xor_into(&mut checksum, plain);
            out.extend_from_slice(&x);
        }
    }

    double(&mut offset);
    xor_into(&mut checksum, &offset);
    xor_into(&mut checksum, &n);
    k.encrypt(&mut checksum);
    (out, checksum)
}

fn check_nonce(c: &KeyedCipher, nonce: &[u8]) -> Result<()> {
    if nonce.len() > c.block_len() {
        return Err(Error::NonceLength(nonce.len()));
    }
    Ok(())
}

/// Encrypts and authenticates `plaintext` under `nonce` (at most one block,
/// zero-extended).
pub fn ocb_seal(c: &KeyedCipher, nonce: &[u8], plaintext: &[u8], tag_len: usize) -> Result<(AeadOutput, CallLedger)> {
    check_tag_len(tag_len)?;
    check_nonce(c, nonce)?;
    let k = Counted::new(c);
    let (ciphertext, mut tag) = process(&k, nonce, plaintext, Direction::Seal);
    tag.truncate(tag_len);
    let ledger = k.ledger("ocb", block_count(plaintext.len(), c.block_len()));
    Ok((AeadOutput { ciphertext, tag }, ledger))
}

/// Decrypts and verifies. A tag mismatch yields [`Verified::Forged`] and no
/// plaintext.
pub fn ocb_open(c: &KeyedCipher, nonce: &[u8], ciphertext: &[u8], tag: &[u8]) -> Result<(Verified, CallLedger)> {
    check_tag_len(tag.len())?;
    check_nonce(c, nonce)?;
    let k = Counted::new(c);
    let (plaintext, expected) = process(&k, nonce, ciphertext, Direction::Open);
    let ledger = k.ledger("ocb", block_count(ciphertext.len(), c.block_len()));
    let verdict = if ct_eq(&expected[..tag.len()], tag) {
        Verified::Valid(plaintext)
    } else {
        Verified::Forged
    };
    Ok((verdict, ledger))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ciphers::make_cipher;

    #[test]
    fn call_counts() {
        let c = make_cipher("aes_speed", &[3; 16]).unwrap();
        for n in 1..=8usize {
            let (_, l) = ocb_seal(&c, &[1, 2, 3], &vec![0xa5; 16 * n], 8).unwrap();
            assert_eq!(l.cipher_calls, n as u64 + 2);
            let (_, l) = ocb_seal(&c, &[1, 2, 3], &vec![0xa5; 16 * n - 3], 4).unwrap();
            assert_eq!(l.cipher_calls, n as u64 + 2);
        }
    }

    #[test]
    fn round_trip_partial_and_full() {
        for name in ["aes_size", "xxtea_opt", "skipjack"] {
            let key = vec![9u8; if name == "skipjack" { 10 } else { 16 }];
            let c = make_cipher(name, &key).unwrap();
            for len in 1..=29 {
                let p: Vec<u8> = (0..len as u8).collect();
                let (out, _) = ocb_seal(&c, &[0, 0, 0, 7], &p, 8).unwrap();
                assert_eq!(out.ciphertext.len(), p.len());
                let (v, _) = ocb_open(&c, &[0, 0, 0, 7], &out.ciphertext, &out.tag).unwrap();
                assert_eq!(v, Verified::Valid(p));
            }
        }
    }

    #[test]
    fn tampering_is_forged() {
        let c = make_cipher("aes_speed", &[5; 16]).unwrap();
        let (out, _) = ocb_seal(&c, &[1], b"twenty-nine bytes of payload!", 4).unwrap();
        let mut ct = out.ciphertext.clone();
        ct[20] ^= 0x40;
        assert_eq!(ocb_open(&c, &[1], &ct, &out.tag).unwrap().0, Verified::Forged);
        let mut tag = out.tag.clone();
        tag[0] ^= 1;
        assert_eq!(ocb_open(&c, &[1], &out.ciphertext, &tag).unwrap().0, Verified::Forged);
        assert_eq!(
            ocb_open(&c, &[2], &out.ciphertext, &out.tag).unwrap().0,
            Verified::Forged
        );
    }

    #[test]
    fn rejects_oversize_nonce() {
        let c = make_cipher("xxtea", &[5; 16]).unwrap();
        assert_eq!(ocb_seal(&c, &[0; 9], b"x", 8).unwrap_err(), Error::NonceLength(9));
    }

    #[test]
    fn empty_message_is_tag_only() {
        let c = make_cipher("xxtea", &[5; 16]).unwrap();
        let (out, ledger) = ocb_seal(&c, &[3], b"", 4).unwrap();
        assert!(out.ciphertext.is_empty());
        assert_eq!(ledger.cipher_calls, 2);
        assert!(ocb_open(&c, &[3], b"", &out.tag).unwrap().0.is_valid());
        assert_eq!(ocb_open(&c, &[4], b"", &out.tag).unwrap().0, Verified::Forged);
    }
}
