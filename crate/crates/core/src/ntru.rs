//! Key generation, randomized encryption, and three-stage decryption over the
//! convolution ring.
//!
//! Keys are generated from ternary secret polynomials: `f` (with inverses
//! `f_p` mod p and `f_q` mod q forming the private key) and a throwaway `g`
//! that produces the public key `h = f_q * g (mod q)`. Encryption blinds the
//! plaintext with a fresh ternary polynomial `r`: `c = p*h*r + m (mod q)`.
//! Decryption multiplies by `f`, lifts to centered form, reduces mod p and
//! multiplies by `f_p`, which cancels the blinding term exactly while the
//! accumulated noise stays below q/2.
//!
//! Callers inject the random source. Use a cryptographically secure generator
//! (e.g. `rand::rng()`) in production; seeded generators are for tests and
//! reproducible demos only.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ring::{Poly, RingParams};

/// Resampling budget for non-invertible `f`; exceeding it indicates a
/// parameter bug rather than bad luck.
pub const KEYGEN_MAX_ATTEMPTS: u32 = 100;

/// Coefficient counts for the ternary secrets: `f` gets `d_f + 1` coefficients
/// of +1 and `d_f` of -1 (so f(1) = 1, which improves invertibility odds),
/// while `g` and `r` get `d_g` / `d_r` of each sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingSpec {
    pub d_f: u32,
    pub d_g: u32,
    pub d_r: u32,
}

impl SamplingSpec {
    pub fn new(d_f: u32, d_g: u32, d_r: u32) -> Self {
        Self { d_f, d_g, d_r }
    }

    /// Check the counts fit the ring degree. Zero counts are rejected: a zero
    /// `g` or `r` degenerates the scheme and a zero-ish `f` serves nothing.
    pub fn validate(&self, params: &RingParams) -> Result<()> {
        let n = params.n() as u64;
        if self.d_f < 1 || self.d_g < 1 || self.d_r < 1 {
            return Err(Error::InvalidSamplingSpec(format!(
                "counts must be at least 1, got d_f={}, d_g={}, d_r={}",
                self.d_f, self.d_g, self.d_r
            )));
        }
        if 2 * self.d_f as u64 + 1 > n {
            return Err(Error::InvalidSamplingSpec(format!(
                "2*d_f + 1 = {} exceeds N = {n}",
                2 * self.d_f as u64 + 1
            )));
        }
        if 2 * self.d_g as u64 > n {
            return Err(Error::InvalidSamplingSpec(format!(
                "2*d_g = {} exceeds N = {n}",
                2 * self.d_g as u64
            )));
        }
        if 2 * self.d_r as u64 > n {
            return Err(Error::InvalidSamplingSpec(format!(
                "2*d_r = {} exceeds N = {n}",
                2 * self.d_r as u64
            )));
        }
        Ok(())
    }
}

/// Uniform ternary polynomial with exactly `plus` coefficients of +1 and
/// `minus` of -1, the rest zero.
fn sample_ternary<R: Rng + ?Sized>(n: usize, plus: u32, minus: u32, rng: &mut R) -> Poly {
    debug_assert!(plus as usize + minus as usize <= n);
    let mut coeffs = vec![0i64; n];
    for c in coeffs.iter_mut().take(plus as usize) {
        *c = 1;
    }
    for c in coeffs.iter_mut().skip(plus as usize).take(minus as usize) {
        *c = -1;
    }
    coeffs.shuffle(rng);
    Poly::new(coeffs)
}

/// Check `poly` is centered ternary with exactly the given sign counts.
fn check_ternary(poly: &Poly, n: usize, plus: u32, minus: u32, role: &str) -> Result<()> {
    if poly.len() != n {
        return Err(Error::DimensionMismatch {
            left: poly.len(),
            right: n,
        });
    }
    let mut plus_seen = 0u32;
    let mut minus_seen = 0u32;
    for &c in poly.coeffs() {
        match c {
            0 => {}
            1 => plus_seen += 1,
            -1 => minus_seen += 1,
            other => {
                return Err(Error::InvalidSamplingSpec(format!(
                    "{role} must be ternary, found coefficient {other}"
                )))
            }
        }
    }
    if plus_seen != plus || minus_seen != minus {
        return Err(Error::InvalidSamplingSpec(format!(
            "{role} must have {plus} coefficients of +1 and {minus} of -1, found {plus_seen}/{minus_seen}"
        )));
    }
    Ok(())
}

fn in_centered_range(c: i64, modulus: u64) -> bool {
    let half = (modulus / 2) as i64;
    if modulus.is_multiple_of(2) {
        c > -half && c <= half
    } else {
        (-half..=half).contains(&c)
    }
}

/// The private key: `f` with its two inverses, plus the parameters and
/// sampling counts the key was generated under.
#[derive(Clone, PartialEq, Eq)]
pub struct PrivateKey {
    f: Poly,
    f_p: Poly,
    f_q: Poly,
    params: RingParams,
    spec: SamplingSpec,
}

impl std::fmt::Debug for PrivateKey {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("PrivateKey")
            .field("f", &"[redacted]")
            .field("params", &self.params)
            .field("spec", &self.spec)
            .finish()
    }
}

impl PrivateKey {
    /// Reassemble a private key from its parts, re-checking every invariant
    /// (ternary counts on `f`, coefficient ranges, and both inverse
    /// relations f*f_p = 1 mod p and f*f_q = 1 mod q).
    pub fn from_parts(
        f: Poly,
        f_p: Poly,
        f_q: Poly,
        params: RingParams,
        spec: SamplingSpec,
    ) -> Result<Self> {
        spec.validate(&params)?;
        let n = params.n();
        check_ternary(&f, n, spec.d_f + 1, spec.d_f, "f")?;
        for (poly, modulus, name) in [(&f_p, params.p(), "f_p"), (&f_q, params.q(), "f_q")] {
            if poly.len() != n {
                return Err(Error::DimensionMismatch {
                    left: poly.len(),
                    right: n,
                });
            }
            if poly.coeffs().iter().any(|&c| c < 0 || c as u64 >= modulus) {
                return Err(Error::InvalidRingParams(format!(
                    "{name} must be reduced into [0, {modulus})"
                )));
            }
        }
        let one = Poly::one(n);
        if f.convolve(&f_p, params.p())? != one {
            return Err(Error::NotInvertible {
                modulus: params.p(),
            });
        }
        if f.convolve(&f_q, params.q())? != one {
            return Err(Error::NotInvertible {
                modulus: params.q(),
            });
        }
        Ok(Self {
            f,
            f_p,
            f_q,
            params,
            spec,
        })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn f_p(&self) -> &Poly {
        &self.f_p
    }

    pub fn f_q(&self) -> &Poly {
        &self.f_q
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn spec(&self) -> &SamplingSpec {
        &self.spec
    }
}

/// The public key `h` plus the parameters and sampling counts encryptors need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    h: Poly,
    params: RingParams,
    spec: SamplingSpec,
}

impl PublicKey {
    /// Reassemble a public key, checking the coefficient range of `h`. Whether
    /// `h` really came from some ternary `g` is not checkable from `h` alone.
    pub fn from_parts(h: Poly, params: RingParams, spec: SamplingSpec) -> Result<Self> {
        spec.validate(&params)?;
        if h.len() != params.n() {
            return Err(Error::DimensionMismatch {
                left: h.len(),
                right: params.n(),
            });
        }
        if h.coeffs().iter().any(|&c| c < 0 || c as u64 >= params.q()) {
            return Err(Error::InvalidRingParams(format!(
                "h must be reduced into [0, {})",
                params.q()
            )));
        }
        Ok(Self { h, params, spec })
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn spec(&self) -> &SamplingSpec {
        &self.spec
    }
}

/// A message polynomial with coefficients in centered form mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plaintext {
    poly: Poly,
    params: RingParams,
}

impl Plaintext {
    pub fn new(poly: Poly, params: &RingParams) -> Result<Self> {
        if poly.len() != params.n() {
            return Err(Error::InvalidPlaintext(format!(
                "expected {} coefficients, got {}",
                params.n(),
                poly.len()
            )));
        }
        if let Some(&c) = poly
            .coeffs()
            .iter()
            .find(|&&c| !in_centered_range(c, params.p()))
        {
            return Err(Error::InvalidPlaintext(format!(
                "coefficient {c} outside the centered range mod {}",
                params.p()
            )));
        }
        Ok(Self {
            poly,
            params: *params,
        })
    }

    /// The zero message.
    pub fn zero(params: &RingParams) -> Self {
        Self {
            poly: Poly::zero(params.n()),
            params: *params,
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }
}

/// A ciphertext polynomial reduced mod q. `summands` counts how many fresh
/// encryptions were absorbed into it (1 for a fresh ciphertext); the additive
/// layer uses it to track noise capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    poly: Poly,
    summands: u32,
    params: RingParams,
}

impl Ciphertext {
    pub fn from_parts(poly: Poly, summands: u32, params: RingParams) -> Result<Self> {
        if poly.len() != params.n() {
            return Err(Error::InvalidCiphertext(format!(
                "expected {} coefficients, got {}",
                params.n(),
                poly.len()
            )));
        }
        if poly
            .coeffs()
            .iter()
            .any(|&c| c < 0 || c as u64 >= params.q())
        {
            return Err(Error::InvalidCiphertext(format!(
                "coefficients must be reduced into [0, {})",
                params.q()
            )));
        }
        if summands == 0 {
            return Err(Error::InvalidCiphertext(
                "summand count must be at least 1".into(),
            ));
        }
        Ok(Self {
            poly,
            summands,
            params,
        })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn summands(&self) -> u32 {
        self.summands
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }
}

/// Generate a key pair, resampling `f` until it is invertible mod p and mod q
/// (at most [`KEYGEN_MAX_ATTEMPTS`] tries). The throwaway `g` is sampled fresh
/// and dropped after `h` is computed.
pub fn keygen<R: Rng + ?Sized>(
    params: &RingParams,
    spec: &SamplingSpec,
    rng: &mut R,
) -> Result<(PrivateKey, PublicKey)> {
    spec.validate(params)?;
    let n = params.n();
    for _ in 0..KEYGEN_MAX_ATTEMPTS {
        let f = sample_ternary(n, spec.d_f + 1, spec.d_f, rng);
        if let Ok(keys) =
            keygen_from_secrets(params, spec, f, sample_ternary(n, spec.d_g, spec.d_g, rng))
        {
            return Ok(keys);
        }
    }
    Err(Error::KeygenExhausted {
        attempts: KEYGEN_MAX_ATTEMPTS,
    })
}

/// Derive the key pair from explicit secrets `f` and `g`.
///
/// This is the deterministic core of [`keygen`]; it also lets tests and demos
/// replay the documented reference vectors exactly. Both secrets must be
/// ternary with the counts declared in `spec`.
pub fn keygen_from_secrets(
    params: &RingParams,
    spec: &SamplingSpec,
    f: Poly,
    g: Poly,
) -> Result<(PrivateKey, PublicKey)> {
    spec.validate(params)?;
    let n = params.n();
    check_ternary(&f, n, spec.d_f + 1, spec.d_f, "f")?;
    check_ternary(&g, n, spec.d_g, spec.d_g, "g")?;
    let (p_prime, p_exponent) = params.p_prime_power();
    let (q_prime, q_exponent) = params.q_prime_power();
    let f_p = f.inverse_mod_prime_power(p_prime, p_exponent)?;
    let f_q = f.inverse_mod_prime_power(q_prime, q_exponent)?;
    let h = f_q.convolve(&g, params.q())?;
    let private = PrivateKey {
        f,
        f_p,
        f_q,
        params: *params,
        spec: *spec,
    };
    let public = PublicKey {
        h,
        params: *params,
        spec: *spec,
    };
    Ok((private, public))
}

/// Encrypt with a freshly sampled ternary blinding polynomial `r`:
/// `c = p*h*r + m (mod q)`.
pub fn encrypt<R: Rng + ?Sized>(
    public: &PublicKey,
    plaintext: &Plaintext,
    rng: &mut R,
) -> Result<Ciphertext> {
    let r = sample_ternary(public.params.n(), public.spec.d_r, public.spec.d_r, rng);
    encrypt_with_blinding(public, plaintext, &r)
}

/// Encrypt with an explicit blinding polynomial. The caller owns the quality
/// of `r`; reusing one across messages leaks plaintext differences.
pub fn encrypt_with_blinding(
    public: &PublicKey,
    plaintext: &Plaintext,
    r: &Poly,
) -> Result<Ciphertext> {
    if plaintext.params != public.params {
        return Err(Error::InvalidPlaintext(
            "plaintext ring parameters do not match the public key".into(),
        ));
    }
    check_ternary(r, public.params.n(), public.spec.d_r, public.spec.d_r, "r")?;
    let q = public.params.q();
    let blinded = public
        .h
        .convolve(r, q)?
        .scalar_mul_mod(public.params.p(), q);
    let c = blinded.add_mod(&plaintext.poly, q)?;
    Ok(Ciphertext {
        poly: c,
        summands: 1,
        params: public.params,
    })
}

/// Three-stage decryption: multiply by `f` mod q, lift to centered form,
/// reduce mod p, multiply by `f_p` mod p, and return the centered result.
///
/// No local check can tell a valid ciphertext from an over-capacity one; an
/// aggregate whose noise crossed q/2 decrypts to garbage without any error.
/// Use the additive layer's capacity bound to stay in range.
pub fn decrypt(private: &PrivateKey, ciphertext: &Ciphertext) -> Result<Plaintext> {
    if ciphertext.params != private.params {
        return Err(Error::IncompatibleCiphertexts(
            "ciphertext ring parameters do not match the private key".into(),
        ));
    }
    let (p, q) = (private.params.p(), private.params.q());
    let t = ciphertext.poly.convolve(&private.f, q)?;
    let tau = t.centered_lift(q).reduce_mod(p);
    let recovered = tau.convolve(&private.f_p, p)?.centered_lift(p);
    Ok(Plaintext {
        poly: recovered,
        params: private.params,
    })
}

/// Rebuild a public key from a stored private key under a fresh `g`. Each call
/// yields a different `h` for the same `f`; all of them decrypt with the one
/// private key.
#[cfg(test)]
fn regenerate_public<R: Rng + ?Sized>(private: &PrivateKey, rng: &mut R) -> PublicKey {
    let n = private.params.n();
    let g = sample_ternary(n, private.spec.d_g, private.spec.d_g, rng);
    let h = private
        .f_q
        .convolve(&g, private.params.q())
        .expect("key polynomials share N");
    PublicKey {
        h,
        params: private.params,
        spec: private.spec,
    }
}
