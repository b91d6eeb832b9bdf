//! Galois/Counter Mode over 128-bit block ciphers. Only the forward cipher
//! is ever invoked.

use super::{block_count, check_tag_len, ct_eq, xor_into, AeadOutput, CallLedger, Counted, Verified};
use crate::ciphers::KeyedCipher;
use crate::error::{Error, Result};

const B: usize = 16;
// R = 11100001 || 0^120
const R: u128 = 0xE1 << 120;

/// Product in GF(2^128) with the GCM bit ordering (bit 0 is the MSB of the
/// first byte, so the integer's most significant bit is x^0).
pub fn gf128_mul(x: u128, y: u128) -> u128 {
    let mut z = 0u128;
    let mut v = y;
    for i in 0..128 {
        if (x >> (127 - i)) & 1 == 1 {
            z ^= v;
        }
        v = if v & 1 == 1 { (v >> 1) ^ R } else { v >> 1 };
    }
    z
}

fn absorb(h: u128, acc: &mut u128, data: &[u8]) {
    for chunk in data.chunks(B) {
        let mut block = [0u8; B];
        block[..chunk.len()].copy_from_slice(chunk);
        *acc = gf128_mul(*acc ^ u128::from_be_bytes(block), h);
    }
}

/// GHASH over `aad || pad || ciphertext || pad || [len(aad)]_64 || [len(ct)]_64`.
pub fn ghash(h: &[u8; B], aad: &[u8], ciphertext: &[u8]) -> [u8; B] {
    let h = u128::from_be_bytes(*h);
    let mut acc = 0u128;
    absorb(h, &mut acc, aad);
    absorb(h, &mut acc, ciphertext);
    let lens = ((aad.len() as u128 * 8) << 64) | (ciphertext.len() as u128 * 8);
    acc = gf128_mul(acc ^ lens, h);
    acc.to_be_bytes()
}

fn inc32(block: &mut [u8; B]) {
    let ctr = u32::from_be_bytes([block[12], block[13], block[14], block[15]]).wrapping_add(1);
    block[12..].copy_from_slice(&ctr.to_be_bytes());
}

struct Setup {
    h: [u8; B],
    j0: [u8; B],
}

fn setup(k: &Counted<'_>, iv: &[u8]) -> Setup {
    let mut h = [0u8; B];
    k.encrypt(&mut h);
    let j0 = if iv.len() == 12 {
        let mut j = [0u8; B];
        j[..12].copy_from_slice(iv);
        j[15] = 1;
        j
    } else {
        ghash(&h, &[], iv)
    };
    Setup { h, j0 }
}

fn gctr(k: &Counted<'_>, j0: &[u8; B], data: &mut [u8]) {
    let mut cb = *j0;
    for chunk in data.chunks_mut(B) {
        inc32(&mut cb);
        let mut s = cb;
        k.encrypt(&mut s);
        xor_into(chunk, &s);
    }
}

fn full_tag(k: &Counted<'_>, s: &Setup, aad: &[u8], ciphertext: &[u8]) -> [u8; B] {
    let mut tag = ghash(&s.h, aad, ciphertext);
    let mut mask = s.j0;
    k.encrypt(&mut mask);
    xor_into(&mut tag, &mask);
    tag
}

fn check(c: &KeyedCipher, iv: &[u8]) -> Result<()> {
    if c.block_len() != B {
        return Err(Error::NeedsWideBlock("gcm"));
    }
    if iv.is_empty() {
        return Err(Error::NonceLength(0));
    }
    Ok(())
}

pub(crate) fn gcm_seal_full(
    c: &KeyedCipher,
    iv: &[u8],
    aad: &[u8],
    plaintext: &[u8],
) -> Result<(Vec<u8>, [u8; B], CallLedger)> {
    check(c, iv)?;
    let k = Counted::new(c);
    let s = setup(&k, iv);
    let mut ciphertext = plaintext.to_vec();
    gctr(&k, &s.j0, &mut ciphertext);
    let tag = full_tag(&k, &s, aad, &ciphertext);
    Ok((ciphertext, tag, k.ledger("gcm", block_count(plaintext.len(), B))))
}

/// Encrypts `plaintext` and authenticates it together with `aad`, which is
/// not encrypted.
pub fn gcm_seal(
    c: &KeyedCipher,
    iv: &[u8],
    aad: &[u8],
    plaintext: &[u8],
    tag_len: usize,
) -> Result<(AeadOutput, CallLedger)> {
    check_tag_len(tag_len)?;
    let (ciphertext, tag, ledger) = gcm_seal_full(c, iv, aad, plaintext)?;
    Ok((
        AeadOutput {
            ciphertext,
            tag: tag[..tag_len].to_vec(),
        },
        ledger,
    ))
}

pub fn gcm_open(
    c: &KeyedCipher,
    iv: &[u8],
    aad: &[u8],
    ciphertext: &[u8],
    tag: &[u8],
) -> Result<(Verified, CallLedger)> {
    check_tag_len(tag.len())?;
    check(c, iv)?;
    let k = Counted::new(c);
    let s = setup(&k, iv);
    let expected = full_tag(&k, &s, aad, ciphertext);
    let mut plaintext = ciphertext.to_vec();
    gctr(&k, &s.j0, &mut plaintext);
    let ledger = k.ledger("gcm", block_count(ciphertext.len(), B));
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

    // Published GCM test cases 1-4 (AES-128).
    struct Case {
        key: &'static str,
        iv: &'static str,
        pt: &'static str,
        aad: &'static str,
        ct: &'static str,
        tag: &'static str,
    }

    const CASES: &[Case] = &[
        Case {
            key: "00000000000000000000000000000000",
            iv: "000000000000000000000000",
            pt: "",
            aad: "",
            ct: "",
            tag: "58e2fccefa7e3061367f1d57a4e7455a",
        },
        Case {
            key: "00000000000000000000000000000000",
            iv: "000000000000000000000000",
            pt: "00000000000000000000000000000000",
            aad: "",
            ct: "0388dace60b6a392f328c2b971b2fe78",
            tag: "ab6e47d42cec13bdf53a67b21257bddf",
        },
        Case {
            key: "feffe9928665731c6d6a8f9467308308",
            iv: "cafebabefacedbaddecaf888",
            pt: "d9313225f88406e5a55909c5aff5269a86a7a9531534f7da2e4c303d8a318a721c3c0c95956809532fcf0e2449a6b525b16aedf5aa0de657ba637b391aafd255",
            aad: "",
            ct: "42831ec2217774244b7221b784d0d49ce3aa212f2c02a4e035c17e2329aca12e21d514b25466931c7d8f6a5aac84aa051ba30b396a0aac973d58e091473f5985",
            tag: "4d5c2af327cd64a62cf35abd2ba6fab4",
        },
        Case {
            key: "feffe9928665731c6d6a8f9467308308",
            iv: "cafebabefacedbaddecaf888",
            pt: "d9313225f88406e5a55909c5aff5269a86a7a9531534f7da2e4c303d8a318a721c3c0c95956809532fcf0e2449a6b525b16aedf5aa0de657ba637b39",
            aad: "feedfacedeadbeeffeedfacedeadbeefabaddad2",
            ct: "42831ec2217774244b7221b784d0d49ce3aa212f2c02a4e035c17e2329aca12e21d514b25466931c7d8f6a5aac84aa051ba30b396a0aac973d58e091",
            tag: "5bc94fbc3221a5db94fae95ae7121a47",
        },
    ];

    #[test]
    fn published_test_cases() {
        for case in CASES {
            let h = |s: &str| hex::decode(s).unwrap();
            for name in ["aes_speed", "aes_size"] {
                let c = make_cipher(name, &h(case.key)).unwrap();
                let (ct, tag, ledger) = gcm_seal_full(&c, &h(case.iv), &h(case.aad), &h(case.pt)).unwrap();
                assert_eq!(hex::encode(&ct), case.ct);
                assert_eq!(hex::encode(tag), case.tag);
                assert_eq!(ledger.decrypt_calls, 0);
                let (v, l) = gcm_open(&c, &h(case.iv), &h(case.aad), &ct, &tag[..8]).unwrap();
                assert_eq!(v, Verified::Valid(h(case.pt)));
                assert_eq!(l.decrypt_calls, 0);
            }
        }
    }

    #[test]
    fn ghash_with_zero_key_is_zero() {
        assert_eq!(ghash(&[0; 16], b"associated", b"ciphertext bytes"), [0; 16]);
    }

    #[test]
    fn gf_mul_identity() {
        let one = 1u128 << 127;
        let x = 0x66e94bd4ef8a2c3b884cfa59ca342b2eu128;
        assert_eq!(gf128_mul(x, one), x);
        assert_eq!(gf128_mul(one, x), x);
        assert_eq!(gf128_mul(x, 0), 0);
    }

    #[test]
    fn modified_aad_is_forged() {
        let c = make_cipher("aes_speed", &[1; 16]).unwrap();
        let (out, _) = gcm_seal(&c, &[2; 12], b"header", b"payload", 8).unwrap();
        let (v, _) = gcm_open(&c, &[2; 12], b"headet", &out.ciphertext, &out.tag).unwrap();
        assert_eq!(v, Verified::Forged);
    }

    #[test]
    fn non_96_bit_iv_round_trips() {
        let c = make_cipher("aes_size", &[1; 16]).unwrap();
        let (out, _) = gcm_seal(&c, &[7; 8], b"", b"payload", 4).unwrap();
        let (v, _) = gcm_open(&c, &[7; 8], b"", &out.ciphertext, &out.tag).unwrap();
        assert!(v.is_valid());
    }
}
