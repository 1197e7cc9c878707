//! Additive homomorphic encryption over the NTRU convolution ring
//! Z\[x\]/(x^N - 1), together with a textbook-RSA multiplicative baseline and a
//! deterministic multi-party aggregation simulator.
//!
//! Ciphertexts from [`ntru`] can be summed coefficient-wise ([`ahe`]); the
//! sum decrypts to the coefficient-wise sum of the plaintexts mod p, because
//! the per-encryption blinding terms all carry a factor of p and vanish in
//! the mod-p stage of decryption. [`ahe::capacity`] bounds how many summands
//! stay exactly decryptable. [`aggsim`] wires it together into an n-client /
//! aggregator / key-holder simulation, and [`rsa_mhe`] provides the
//! multiplicative counterpart for contrast.
//!
//! # Security status
//!
//! Research and demo code. The documented parameter sets are toy-sized,
//! nothing here is constant-time or side-channel hardened, there is no
//! CCA-style transform, and the RSA baseline is textbook-insecure on
//! purpose. Do not protect real data with this crate.

pub mod aggsim;
pub mod ahe;
pub mod codec;
mod error;
pub mod ntru;
pub mod ring;
pub mod rsa_mhe;
pub mod vectors;

pub use error::{Error, Result};
