//! Configurable link-layer security for constrained sensor networks.
//!
//! The crate bundles pluggable 64/128-bit block ciphers, CBC / CBC-MAC /
//! OCB / CCM / GCM modes with block-cipher call accounting, three
//! anti-replay schemes (windowed counters, SHA-1 digest rings and a Bloom
//! filter), the secured frame codec, the nine-mode security policy table,
//! a deterministic multi-hop simulator and a CSV benchmark front end.
//!
//! The analytic calculators (Bloom false-positive rates, MAC forgery time,
//! throughput) are generic over the floating-point type through [`Real`];
//! the aliases below fix the `f64` instantiations used by the CLI.

pub mod bench;
pub mod ciphers;
pub mod config;
pub mod error;
pub mod hashes;
pub mod modes;
pub mod num;
pub mod packet;
pub mod policy;
pub mod replay;
pub mod simnet;

pub use ciphers::{key_horizon, make_cipher, tea_delta, CipherName, CipherSpec, KeyedCipher};
pub use error::{Error, Result};
pub use modes::{AeadOutput, CallLedger, Verified};
pub use num::Real;
pub use packet::{FrameHeader, FrameVerdict, SecuredFrame};
pub use policy::{FlexiMode, ResourceTier};
pub use replay::{Freshness, ReplayScheme, ReplayState};

/// Default scalar for probabilities, rates and durations.
pub type Scalar = f64;
/// Bloom false-positive model over [`Scalar`].
pub type FpModel = replay::analytics::FalsePositiveModel<Scalar>;
/// Single-precision Bloom model, handy for embedded-style sweeps.
pub type FpModel32 = replay::analytics::FalsePositiveModel<f32>;
/// MAC-forgery time model over [`Scalar`].
pub type ForgeryModel = policy::ForgeryModel<Scalar>;
