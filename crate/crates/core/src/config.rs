//! `key = value` configuration files. `#` starts a comment; blank lines are
//! ignored; keys may appear once.

use crate::error::{Error, Result};
use crate::policy::{select_mode, FlexiMode, ResourceTier};
use crate::replay::ReplayScheme;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Keys that would override the mode-determined tag length.
pub const FORBIDDEN_KEYS: [&str; 3] = ["mac", "mac_len", "tag_len"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim().to_ascii_lowercase();
            if k.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", n + 1)));
            }
            if entries.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", n + 1)));
            }
        }
        let kv = KeyValues { entries };
        kv.forbid(&FORBIDDEN_KEYS)?;
        Ok(kv)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::Config(format!("`{key}` = `{v}`: {e}")))
            })
            .transpose()
    }

    pub fn parsed_or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    pub fn forbid(&self, keys: &[&str]) -> Result<()> {
        match keys.iter().find(|k| self.entries.contains_key(**k)) {
            Some(k) => Err(Error::Config(format!(
                "`{k}` cannot be set; the tag length follows the mode"
            ))),
            None => Ok(()),
        }
    }

    /// Rejects keys outside `known`, catching typos.
    pub fn only(&self, known: &[&str]) -> Result<()> {
        match self.keys().find(|k| !known.contains(k)) {
            Some(k) => Err(Error::Config(format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }
}

/// The policy triple: mode, resource tier and replay scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicyConfig {
    pub mode: FlexiMode,
    pub tier: ResourceTier,
    pub replay_scheme: ReplayScheme,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            mode: select_mode("8").expect("mode 8 exists"),
            tier: ResourceTier::LowStorageEnergy,
            replay_scheme: ReplayScheme::Counter,
        }
    }
}

impl PolicyConfig {
    pub const KEYS: [&'static str; 3] = ["mode", "tier", "replay_scheme"];

    pub fn from_kv(kv: &KeyValues) -> Result<Self> {
        let d = Self::default();
        Ok(PolicyConfig {
            mode: match kv.get("mode") {
                Some(m) => select_mode(m)?,
                None => d.mode,
            },
            tier: kv.parsed_or("tier", d.tier)?,
            replay_scheme: kv.parsed_or("replay_scheme", d.replay_scheme)?,
        })
    }
}
