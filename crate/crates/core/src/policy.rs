//! The nine security modes, cipher tiering and the throughput / forgery
//! calculators.

use crate::ciphers::CipherName;
use crate::error::{Error, Result};
use crate::num::Real;
use crate::Scalar;
use std::fmt;
use std::str::FromStr;

/// Clock used for throughput reporting unless overridden.
pub const DEFAULT_CLOCK_HZ: u64 = 8_000_000;
/// Frame size assumed by the forgery model.
pub const DEFAULT_PACKET_BYTES: u64 = 68;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    None,
    Sha1,
    CbcMac,
    Ocb,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::None => "none",
            Algorithm::Sha1 => "sha1",
            Algorithm::CbcMac => "cbc_mac",
            Algorithm::Ocb => "ocb",
        }
    }

    /// Whether the algorithm needs a keyed block cipher.
    pub fn keyed(self) -> bool {
        matches!(self, Algorithm::CbcMac | Algorithm::Ocb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Attributes {
    pub confidentiality: bool,
    pub authentication: bool,
    pub replay_protection: bool,
    pub unkeyed_hash: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlexiMode {
    pub id: u8,
    pub name: &'static str,
    pub attributes: Attributes,
    pub algorithm: Algorithm,
    pub tag_len: usize,
    pub replay: bool,
}

const fn row(id: u8, name: &'static str, algorithm: Algorithm, tag_len: usize, replay: bool) -> FlexiMode {
    let keyed = matches!(algorithm, Algorithm::CbcMac | Algorithm::Ocb);
    FlexiMode {
        id,
        name,
        attributes: Attributes {
            confidentiality: matches!(algorithm, Algorithm::Ocb),
            authentication: keyed,
            replay_protection: replay,
            unkeyed_hash: matches!(algorithm, Algorithm::Sha1),
        },
        algorithm,
        tag_len,
        replay,
    }
}

pub const MODES: [FlexiMode; 9] = [
    row(1, "Null", Algorithm::None, 0, false),
    row(2, "FlexiSecHASH", Algorithm::Sha1, 20, false),
    row(3, "FlexiSecAUTH64", Algorithm::CbcMac, 8, false),
    row(4, "FlexiSecAUTH32", Algorithm::CbcMac, 4, false),
    row(5, "FlexiSecAUTH_ENC64", Algorithm::Ocb, 8, false),
    row(6, "FlexiSecAUTH_ENC32", Algorithm::Ocb, 4, false),
    row(7, "FlexiSecAUTH_REPP64", Algorithm::CbcMac, 8, true),
    row(8, "FlexiSecAUTH_REPP32", Algorithm::CbcMac, 4, true),
    row(9, "FlexiSec_AUTH_ENC_REPP64", Algorithm::Ocb, 8, true),
];

impl FlexiMode {
    pub fn by_id(id: u8) -> Result<FlexiMode> {
        MODES
            .iter()
            .find(|m| m.id == id)
            .copied()
            .ok_or_else(|| Error::UnknownMode(id.to_string()))
    }

    pub fn is_null(&self) -> bool {
        self.algorithm == Algorithm::None
    }

    /// Bytes appended after the payload: MAC or digest.
    pub fn overhead(&self) -> usize {
        self.tag_len
    }
}

impl fmt::Display for FlexiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

impl FromStr for FlexiMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        select_mode(s)
    }
}

/// Looks a mode up by id (`"1"`..`"9"`) or exact name.
pub fn select_mode(id_or_name: &str) -> Result<FlexiMode> {
    let s = id_or_name.trim();
    if let Ok(id) = s.parse::<u8>() {
        return FlexiMode::by_id(id);
    }
    MODES
        .iter()
        .find(|m| m.name == s)
        .copied()
        .ok_or_else(|| Error::UnknownMode(s.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResourceTier {
    LowStorageEnergy,
    HighStorageEnergy,
}

impl ResourceTier {
    pub fn as_str(self) -> &'static str {
        match self {
            ResourceTier::LowStorageEnergy => "low",
            ResourceTier::HighStorageEnergy => "high",
        }
    }
}

impl FromStr for ResourceTier {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "low" | "low_storage_energy" => Ok(ResourceTier::LowStorageEnergy),
            "high" | "high_storage_energy" => Ok(ResourceTier::HighStorageEnergy),
            other => Err(Error::Config(format!("unknown tier `{other}`"))),
        }
    }
}

pub fn select_cipher(mode: &FlexiMode, tier: ResourceTier) -> Result<CipherName> {
    if mode.is_null() {
        return Err(Error::NullModeCipher);
    }
    Ok(match tier {
        ResourceTier::LowStorageEnergy => CipherName::XxteaOpt,
        ResourceTier::HighStorageEnergy => CipherName::AesSpeed,
    })
}

/// `message_bits · clock / cycles`, in bits per second.
pub fn throughput<F: Real>(message_bits: u64, clock_hz: u64, cycles: u64) -> Result<F> {
    if cycles == 0 {
        return Err(Error::NonPositive("cycles"));
    }
    Ok(F::from_u64_lossy(message_bits) * F::from_u64_lossy(clock_hz) / F::from_u64_lossy(cycles))
}

pub fn throughput_bps(message_bits: u64, clock_hz: u64, cycles: u64) -> Result<Scalar> {
    throughput(message_bits, clock_hz, cycles)
}

/// Brute-force MAC forgery against a link of `bandwidth_bps` carrying
/// `packet_bytes` frames: one guess per frame, half the tag space on average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForgeryModel<F: Real> {
    pub packet_bytes: u64,
    pub bandwidth_bps: u64,
    _f: std::marker::PhantomData<F>,
}

const SECONDS_PER_DAY: u64 = 86_400;

impl<F: Real> ForgeryModel<F> {
    pub fn new(packet_bytes: u64, bandwidth_bps: u64) -> Result<Self> {
        if bandwidth_bps == 0 {
            return Err(Error::NonPositive("bandwidth_bps"));
        }
        if packet_bytes == 0 {
            return Err(Error::NonPositive("packet_bytes"));
        }
        Ok(ForgeryModel {
            packet_bytes,
            bandwidth_bps,
            _f: std::marker::PhantomData,
        })
    }

    pub fn attempts_per_second(&self) -> F {
        F::from_u64_lossy(self.bandwidth_bps) / F::from_u64_lossy(self.packet_bytes * 8)
    }

    fn guesses(mac_bits: u32) -> Result<F> {
        if mac_bits == 0 {
            return Err(Error::NonPositive("mac_bits"));
        }
        Ok(F::from_u64_lossy(2).powi(mac_bits as i32 - 1))
    }

    /// `2^{k−1} · P · 8 / (W · 86400)`
    pub fn days(&self, mac_bits: u32) -> Result<F> {
        Ok(Self::guesses(mac_bits)? / self.attempts_per_second() / F::from_u64_lossy(SECONDS_PER_DAY))
    }

    /// Same model with the attempt rate rounded up to a multiple of `step`
    /// attempts per second.
    pub fn days_rounded(&self, mac_bits: u32, step: u64) -> Result<F> {
        if step == 0 {
            return Err(Error::NonPositive("step"));
        }
        let step = F::from_u64_lossy(step);
        let rate = (self.attempts_per_second() / step).ceil() * step;
        Ok(Self::guesses(mac_bits)? / rate / F::from_u64_lossy(SECONDS_PER_DAY))
    }
}

pub fn forgery_days(mac_bits: u32, packet_bytes: u64, bandwidth_bps: u64) -> Result<Scalar> {
    ForgeryModel::<Scalar>::new(packet_bytes, bandwidth_bps)?.days(mac_bits)
}

/// Attempt rate rounding used for the prose figures: up to a multiple of 40.
pub const ROUNDING_STEP: u64 = 40;

pub fn forgery_days_rounded(mac_bits: u32, packet_bytes: u64, bandwidth_bps: u64) -> Result<Scalar> {
    ForgeryModel::<Scalar>::new(packet_bytes, bandwidth_bps)?.days_rounded(mac_bits, ROUNDING_STEP)
}
