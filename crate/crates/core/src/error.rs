//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by ring arithmetic, key handling, aggregation and codecs.
#[derive(Debug, Error)]
pub enum Error {
    /// Two polynomials of different lengths were combined.
    #[error("polynomial length mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// The polynomial has no inverse in the requested quotient ring.
    #[error("polynomial is not invertible modulo {modulus}")]
    NotInvertible { modulus: u64 },

    /// Ring parameters failed validation.
    #[error("invalid ring parameters: {0}")]
    InvalidRingParams(String),

    /// Sampling counts are inconsistent with the ring degree.
    #[error("invalid sampling spec: {0}")]
    InvalidSamplingSpec(String),

    /// No invertible secret polynomial was found within the attempt budget.
    #[error("key generation exhausted after {attempts} attempts")]
    KeygenExhausted { attempts: u32 },

    /// Plaintext coefficients are outside the centered range for p.
    #[error("invalid plaintext: {0}")]
    InvalidPlaintext(String),

    /// Ciphertext rejected (out-of-range coefficients or wrong length).
    #[error("invalid ciphertext: {0}")]
    InvalidCiphertext(String),

    /// Ciphertexts under different ring parameters cannot be combined.
    #[error("incompatible ciphertexts: {0}")]
    IncompatibleCiphertexts(String),

    /// An aggregate of zero ciphertexts was requested.
    #[error("cannot aggregate an empty collection")]
    EmptyAggregate,

    /// The noise bound leaves no room for even a single summand.
    #[error("noise bound {bound} reaches half the ciphertext modulus ({half_q}); widen q or shrink the sampling counts")]
    ParameterTooTight { bound: u64, half_q: u64 },

    /// More summands were aggregated than the noise bound guarantees.
    #[error("aggregate of {summands} summands exceeds capacity {capacity}")]
    CapacityExceeded { summands: u32, capacity: u32 },

    /// Message does not fit the packing format's length prefix.
    #[error("message too long to pack: {0} bytes")]
    MessageTooLong(usize),

    /// Malformed coefficient text or packed digits.
    #[error("parse error: {0}")]
    ParseError(String),

    /// Malformed binary blob; `offset` is the byte where parsing failed.
    #[error("deserialize error at byte {offset}: {reason}")]
    DeserializeError { offset: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
