use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown cipher `{0}`")]
    UnknownCipher(String),
    #[error("wrong key length for {cipher}: expected {expected} bytes, got {actual}")]
    KeyLength {
        cipher: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("wrong block length: expected {expected} bytes, got {actual}")]
    BlockLength { expected: usize, actual: usize },
    #[error("key size of {0} bits is below the 56-bit baseline")]
    KeyTooShort(u32),
    #[error("empty input")]
    EmptyInput,
    #[error("input length {len} is not a multiple of the {block}-byte block")]
    Unaligned { len: usize, block: usize },
    #[error("invalid tag length {0}")]
    TagLength(usize),
    #[error("invalid nonce length {0}")]
    NonceLength(usize),
    #[error("mode `{0}` requires a 128-bit block cipher")]
    NeedsWideBlock(&'static str),
    #[error("hash index {index} out of range for a family of {k}")]
    HashIndex { index: usize, k: usize },
    #[error("neighbor table full ({0} entries)")]
    TableFull(usize),
    #[error("unknown replay scheme `{0}`")]
    UnknownScheme(String),
    #[error("network must have at least two nodes")]
    TooFewNodes,
    #[error("payload of {0} bytes exceeds the 29-byte frame limit")]
    PayloadTooLong(usize),
    #[error("sequence counter exhausted toward node {0}")]
    CounterExhausted(u16),
    #[error("counter {ctr} is not above the last counter {last} used toward node {dest}")]
    StaleCounter { dest: u16, ctr: u16, last: u16 },
    #[error("truncated frame: {len} bytes, need at least {need}")]
    TruncatedFrame { len: usize, need: usize },
    #[error("malformed frame: {0}")]
    MalformedFrame(String),
    #[error("mode `{0}` needs a cipher")]
    MissingCipher(&'static str),
    #[error("mode `{0}` needs replay state")]
    MissingReplayState(&'static str),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("the Null mode has no cipher")]
    NullModeCipher,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("config: {0}")]
    Config(String),
    #[error("topology: {0}")]
    Topology(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
