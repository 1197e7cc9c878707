//! Multiplicative homomorphic baseline over textbook RSA, for contrast with
//! the additive lattice scheme.
//!
//! Deliberately toy scale: primes come from trial division, there is no
//! padding, and encryption of equal plaintexts is deterministic. Insecure by
//! construction. Demo and test material only.

use rand::Rng;

use crate::error::{Error, Result};

/// Largest accepted prime factor; trial division stays cheap below 2^32.
const MAX_PRIME: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RsaKeys {
    modulus: u64,
    public_exponent: u64,
    private_exponent: u64,
}

impl RsaKeys {
    /// Build keys from two explicit primes: modulus = p1*p2, public exponent
    /// the smallest odd value coprime to lcm(p1-1, p2-1), private exponent
    /// its modular inverse.
    pub fn from_primes(p1: u64, p2: u64) -> Result<Self> {
        if p1 == p2 {
            return Err(Error::InvalidRingParams(
                "the two primes must be distinct".into(),
            ));
        }
        for p in [p1, p2] {
            if p >= MAX_PRIME || !trial_division_prime(p) {
                return Err(Error::InvalidRingParams(format!(
                    "{p} is not a prime below 2^32"
                )));
            }
        }
        let modulus = p1 * p2;
        let lambda = lcm(p1 - 1, p2 - 1);
        let mut public_exponent = 3;
        while gcd(public_exponent, lambda) != 1 {
            public_exponent += 2;
        }
        let private_exponent =
            mod_inverse(public_exponent, lambda).expect("exponent chosen coprime to lambda");
        Ok(Self {
            modulus,
            public_exponent,
            private_exponent,
        })
    }

    /// Generate keys with a modulus of roughly `bit_length` bits (two random
    /// primes of half that size each). Minimum 16, maximum 62 bits.
    pub fn generate<R: Rng + ?Sized>(bit_length: u32, rng: &mut R) -> Result<Self> {
        if !(16..=62).contains(&bit_length) {
            return Err(Error::InvalidRingParams(format!(
                "bit length must be in 16..=62, got {bit_length}"
            )));
        }
        let p1 = random_prime(bit_length / 2, rng);
        let p2 = loop {
            let candidate = random_prime(bit_length - bit_length / 2, rng);
            if candidate != p1 {
                break candidate;
            }
        };
        Self::from_primes(p1, p2)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn public_exponent(&self) -> u64 {
        self.public_exponent
    }

    pub fn private_exponent(&self) -> u64 {
        self.private_exponent
    }
}

/// Encrypt: plaintext^public_exponent mod modulus.
pub fn encrypt(keys: &RsaKeys, plaintext: u64) -> Result<u64> {
    if plaintext >= keys.modulus {
        return Err(Error::InvalidPlaintext(format!(
            "plaintext {plaintext} must be below the modulus {}",
            keys.modulus
        )));
    }
    Ok(pow_mod(plaintext, keys.public_exponent, keys.modulus))
}

/// Decrypt: ciphertext^private_exponent mod modulus.
pub fn decrypt(keys: &RsaKeys, ciphertext: u64) -> Result<u64> {
    if ciphertext >= keys.modulus {
        return Err(Error::InvalidCiphertext(format!(
            "ciphertext {ciphertext} must be below the modulus {}",
            keys.modulus
        )));
    }
    Ok(pow_mod(ciphertext, keys.private_exponent, keys.modulus))
}

/// Product of ciphertexts mod modulus; decrypts to the product of the
/// plaintexts (mod modulus).
pub fn ct_mul(keys: &RsaKeys, ciphertexts: &[u64]) -> Result<u64> {
    if ciphertexts.is_empty() {
        return Err(Error::EmptyAggregate);
    }
    let mut product: u64 = 1;
    for &c in ciphertexts {
        if c >= keys.modulus {
            return Err(Error::InvalidCiphertext(format!(
                "ciphertext {c} must be below the modulus {}",
                keys.modulus
            )));
        }
        product = ((product as u128 * c as u128) % keys.modulus as u128) as u64;
    }
    Ok(product)
}

fn pow_mod(base: u64, exponent: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut result: u128 = 1 % m;
    let mut base = base as u128 % m;
    let mut exponent = exponent;
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        exponent >>= 1;
    }
    result as u64
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128 % m as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

fn trial_division_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn random_prime<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> u64 {
    loop {
        let candidate = rng.random_range((1u64 << (bits - 1))..(1u64 << bits)) | 1;
        if trial_division_prime(candidate) {
            return candidate;
        }
    }
}
