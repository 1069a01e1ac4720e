//! Error types for each subsystem.

use thiserror::Error;

/// Optimizer configuration and dimension errors.
#[derive(Debug, Clone, Error)]
pub enum OptimError {
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Quality-metric errors.
#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("image shapes differ: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("window {window} does not fit a {width}x{height} image (minimum 2)")]
    BadWindow {
        window: usize,
        width: usize,
        height: usize,
    },
    #[error("quality index undefined: every window has a zero denominator")]
    UndefinedMetric,
}

/// Payload codec errors.
#[derive(Debug, Error)]
pub enum CodecError {
    #[error("plaintext must not be empty")]
    EmptyPlaintext,
    #[error("passphrase must not be empty")]
    EmptyPassphrase,
    #[error("malformed stego header: {0}")]
    BadHeader(&'static str),
    #[error("bit sequence length {0} is not a multiple of 8")]
    RaggedBits(usize),
    #[error("ciphertext integrity check failed (CRC mismatch)")]
    CrcMismatch,
    #[error("decryption failed: wrong passphrase or damaged key material")]
    WrongKey,
}

/// Engine-level errors covering embedding, extraction, and image I/O.
#[derive(Debug, Error)]
pub enum StegoError {
    #[error("payload needs {needed} bytes but the cover holds at most {available}")]
    Capacity { needed: usize, available: usize },
    #[error("cover too small: {slots} LSB slots cannot hold the {header} header bits")]
    CoverTooSmall { slots: usize, header: usize },
    #[error("buffer length mismatch: expected {expected} bytes, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("bit count {got} does not match permutation length {expected}")]
    BitCountMismatch { expected: usize, got: usize },
    #[error("not a stego image: {0}")]
    NotStego(&'static str),
    #[error("unsupported format '{0}': only lossless PNG/BMP input and PNG output are allowed")]
    LossyFormat(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Optimizer(#[from] OptimError),
    #[error(transparent)]
    Image(#[from] image::ImageError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
