use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {0} is not a GF(16) element")]
    FieldRange(u8),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("unsupported code dimension {0} (expected 49 or 44)")]
    UnsupportedCode(usize),
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("invalid degree profile: {0}")]
    Profile(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("target BER {0:e} is not bracketed by the curve")]
    NotBracketed(f64),
}
