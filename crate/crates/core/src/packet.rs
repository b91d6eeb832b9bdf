//! Secured frame codec: `DEST AM LEN SRC CTR | payload | MAC | digest`,
//! all multi-byte fields big-endian.

use crate::ciphers::KeyedCipher;
use crate::error::{Error, Result};
use crate::hashes::{sha1, SHA1_LEN};
use crate::modes::{cbc_mac, ct_eq, ocb_open, ocb_seal, zero_extend, CallLedger, Verified};
use crate::policy::{Algorithm, FlexiMode};
use crate::replay::{Freshness, ReplayState};
use std::collections::BTreeMap;

pub const HEADER_LEN: usize = 8;
pub const MAX_PAYLOAD: usize = 29;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FrameHeader {
    pub dest: u16,
    pub am: u8,
    pub len: u8,
    pub src: u16,
    pub ctr: u16,
}

impl FrameHeader {
    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut h = [0u8; HEADER_LEN];
        h[0..2].copy_from_slice(&self.dest.to_be_bytes());
        h[2] = self.am;
        h[3] = self.len;
        h[4..6].copy_from_slice(&self.src.to_be_bytes());
        h[6..8].copy_from_slice(&self.ctr.to_be_bytes());
        h
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::TruncatedFrame {
                len: bytes.len(),
                need: HEADER_LEN,
            });
        }
        Ok(FrameHeader {
            dest: u16::from_be_bytes([bytes[0], bytes[1]]),
            am: bytes[2],
            len: bytes[3],
            src: u16::from_be_bytes([bytes[4], bytes[5]]),
            ctr: u16::from_be_bytes([bytes[6], bytes[7]]),
        })
    }
}

/// IV / nonce block for a cipher of `block_len` bytes: the serialized header
/// in the low-order bytes, zeros above.
pub fn build_iv(header: &FrameHeader, block_len: usize) -> Vec<u8> {
    zero_extend(&header.encode(), block_len.max(HEADER_LEN))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecuredFrame {
    pub header: FrameHeader,
    pub payload: Vec<u8>,
    pub mac: Vec<u8>,
    pub digest: Option<[u8; SHA1_LEN]>,
}

impl SecuredFrame {
    pub fn wire_len(&self) -> usize {
        HEADER_LEN + self.payload.len() + self.mac.len() + self.digest.map_or(0, |d| d.len())
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.wire_len());
        out.extend_from_slice(&self.header.encode());
        out.extend_from_slice(&self.payload);
        out.extend_from_slice(&self.mac);
        if let Some(d) = &self.digest {
            out.extend_from_slice(d);
        }
        out
    }

    /// Parses a frame whose trailer is `mac_len` MAC bytes, followed by a
    /// SHA-1 digest when `with_digest` is set.
    pub fn decode(bytes: &[u8], mac_len: usize, with_digest: bool) -> Result<Self> {
        let trailer = mac_len + if with_digest { SHA1_LEN } else { 0 };
        let need = HEADER_LEN + trailer;
        if bytes.len() < need {
            return Err(Error::TruncatedFrame { len: bytes.len(), need });
        }
        let header = FrameHeader::decode(bytes)?;
        let len = header.len as usize;
        if len > MAX_PAYLOAD {
            return Err(Error::MalformedFrame(format!(
                "length field {len} exceeds {MAX_PAYLOAD}"
            )));
        }
        if bytes.len() != need + len {
            return Err(Error::MalformedFrame(format!(
                "length field {len} disagrees with a {}-byte frame",
                bytes.len()
            )));
        }
        let (payload, rest) = bytes[HEADER_LEN..].split_at(len);
        let (mac, digest) = rest.split_at(mac_len);
        Ok(SecuredFrame {
            header,
            payload: payload.to_vec(),
            mac: mac.to_vec(),
            digest: with_digest.then(|| digest.try_into().expect("digest length checked")),
        })
    }

    pub fn decode_for(bytes: &[u8], mode: &FlexiMode) -> Result<Self> {
        let (mac_len, digest) = trailer_layout(mode);
        Self::decode(bytes, mac_len, digest)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.encode())
    }
}

fn trailer_layout(mode: &FlexiMode) -> (usize, bool) {
    match mode.algorithm {
        Algorithm::Sha1 => (0, true),
        _ => (mode.tag_len, false),
    }
}

/// Last counter a sender used toward each destination.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SendCounters {
    last: BTreeMap<u16, u16>,
}

impl SendCounters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn last(&self, dest: u16) -> u16 {
        self.last.get(&dest).copied().unwrap_or(0)
    }

    /// Next unused counter toward `dest`. Counters start at 1.
    pub fn next(&self, dest: u16) -> Result<u16> {
        self.last(dest).checked_add(1).ok_or(Error::CounterExhausted(dest))
    }

    pub fn record(&mut self, dest: u16, ctr: u16) -> Result<()> {
        let last = self.last(dest);
        if ctr <= last {
            return Err(if last == u16::MAX {
                Error::CounterExhausted(dest)
            } else {
                Error::StaleCounter { dest, ctr, last }
            });
        }
        self.last.insert(dest, ctr);
        Ok(())
    }
}

fn keyed<'a>(mode: &FlexiMode, cipher: Option<&'a KeyedCipher>) -> Result<&'a KeyedCipher> {
    cipher.ok_or(Error::MissingCipher(mode.name))
}

fn mac_input(header: &FrameHeader, payload: &[u8]) -> Vec<u8> {
    let mut m = header.encode().to_vec();
    m.extend_from_slice(payload);
    m
}

/// Protects `payload` under `mode`. The header's LEN is set from the payload
/// and its CTR must be fresh toward `header.dest`.
pub fn seal_frame(
    mode: &FlexiMode,
    cipher: Option<&KeyedCipher>,
    counters: &mut SendCounters,
    header: FrameHeader,
    payload: &[u8],
) -> Result<(SecuredFrame, CallLedger)> {
    if payload.len() > MAX_PAYLOAD {
        return Err(Error::PayloadTooLong(payload.len()));
    }
    let header = FrameHeader {
        len: payload.len() as u8,
        ..header
    };
    let c = if mode.algorithm.keyed() {
        Some(keyed(mode, cipher)?)
    } else {
        None
    };
    counters.record(header.dest, header.ctr)?;

    let mut frame = SecuredFrame {
        header,
        payload: payload.to_vec(),
        mac: Vec::new(),
        digest: None,
    };
    let ledger = match (mode.algorithm, c) {
        (Algorithm::None, _) => CallLedger::new("none"),
        (Algorithm::Sha1, _) => {
            frame.digest = Some(sha1(&mac_input(&header, payload)));
            CallLedger::new("sha1")
        }
        (Algorithm::CbcMac, Some(c)) => {
            let (tag, l) = cbc_mac(c, &mac_input(&header, payload), mode.tag_len)?;
            frame.mac = tag;
            l
        }
        (Algorithm::Ocb, Some(c)) => {
            let (out, l) = ocb_seal(c, &build_iv(&header, c.block_len()), payload, mode.tag_len)?;
            frame.payload = out.ciphertext;
            frame.mac = out.tag;
            l
        }
        _ => unreachable!("keyed algorithms resolved a cipher above"),
    };
    Ok((frame, ledger))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameVerdict {
    Accept,
    Forged,
    Replayed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenedFrame {
    pub header: FrameHeader,
    /// Plaintext, present only on [`FrameVerdict::Accept`].
    pub payload: Option<Vec<u8>>,
    pub verdict: FrameVerdict,
    pub ledger: CallLedger,
}

impl OpenedFrame {
    fn rejected(header: FrameHeader, verdict: FrameVerdict, ledger: CallLedger) -> Self {
        OpenedFrame {
            header,
            payload: None,
            verdict,
            ledger,
        }
    }
}

/// Verifies a received frame, then runs the replay check in modes that ask
/// for one. Frames whose length field disagrees with their size are forged;
/// only frames too short to hold a header and trailer are errors.
pub fn open_frame(
    mode: &FlexiMode,
    cipher: Option<&KeyedCipher>,
    replay: Option<&mut ReplayState>,
    frame_bytes: &[u8],
) -> Result<OpenedFrame> {
    let (mac_len, with_digest) = trailer_layout(mode);
    let c = if mode.algorithm.keyed() {
        Some(keyed(mode, cipher)?)
    } else {
        None
    };
    if mode.replay && replay.is_none() {
        return Err(Error::MissingReplayState(mode.name));
    }
    let frame = match SecuredFrame::decode(frame_bytes, mac_len, with_digest) {
        Ok(f) => f,
        Err(Error::MalformedFrame(_)) => {
            let header = FrameHeader::decode(frame_bytes)?;
            return Ok(OpenedFrame::rejected(
                header,
                FrameVerdict::Forged,
                CallLedger::new("none"),
            ));
        }
        Err(e) => return Err(e),
    };
    let header = frame.header;

    let (plain, ledger) = match (mode.algorithm, c) {
        (Algorithm::None, _) => (Some(frame.payload), CallLedger::new("none")),
        (Algorithm::Sha1, _) => {
            let expected = sha1(&mac_input(&header, &frame.payload));
            let ok = frame.digest.is_some_and(|d| ct_eq(&d, &expected));
            (ok.then_some(frame.payload), CallLedger::new("sha1"))
        }
        (Algorithm::CbcMac, Some(c)) => {
            let (tag, l) = cbc_mac(c, &mac_input(&header, &frame.payload), mac_len)?;
            (ct_eq(&tag, &frame.mac).then_some(frame.payload), l)
        }
        (Algorithm::Ocb, Some(c)) => {
            let (v, l) = ocb_open(c, &build_iv(&header, c.block_len()), &frame.payload, &frame.mac)?;
            let p = match v {
                Verified::Valid(p) => Some(p),
                Verified::Forged => None,
            };
            (p, l)
        }
        _ => unreachable!("keyed algorithms resolved a cipher above"),
    };
    let Some(plain) = plain else {
        return Ok(OpenedFrame::rejected(header, FrameVerdict::Forged, ledger));
    };
    if mode.replay {
        let state = replay.expect("checked above");
        if state.check(header.src, header.ctr, frame_bytes)? == Freshness::Replayed {
            return Ok(OpenedFrame::rejected(header, FrameVerdict::Replayed, ledger));
        }
    }
    Ok(OpenedFrame {
        header,
        payload: Some(plain),
        verdict: FrameVerdict::Accept,
        ledger,
    })
}
