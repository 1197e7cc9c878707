//! Exact integer polynomial arithmetic in Z\[x\]/(x^N - 1) and its reductions
//! modulo p and modulo q.
//!
//! Multiplication is cyclic convolution of coefficient vectors. Everything is
//! computed with exact 64-bit integer arithmetic: every modulus is capped at
//! [`MAX_MODULUS`] so that a single coefficient product plus a reduced
//! accumulator can never overflow an `i64`. No NTT/FFT path exists and none of
//! the operations are constant-time; this crate is not side-channel hardened.

use crate::error::{Error, Result};

/// Largest accepted modulus (2^31). Keeps `product + accumulator` within i64.
pub const MAX_MODULUS: u64 = 1 << 31;

fn modulus_i64(modulus: u64) -> i64 {
    assert!(
        (2..=MAX_MODULUS).contains(&modulus),
        "modulus must be in 2..=2^31, got {modulus}"
    );
    modulus as i64
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Decompose `x` as `prime^exponent`, or `None` if `x` is not a prime power.
pub fn prime_power(x: u64) -> Option<(u64, u32)> {
    if x < 2 {
        return None;
    }
    let base = x;
    let mut factor = 0;
    let mut d = 2;
    while d * d <= base {
        if base.is_multiple_of(d) {
            factor = d;
            break;
        }
        d += 1;
    }
    if factor == 0 {
        return Some((x, 1)); // x itself is prime
    }
    let mut rest = x;
    let mut exponent = 0;
    while rest.is_multiple_of(factor) {
        rest /= factor;
        exponent += 1;
    }
    (rest == 1).then_some((factor, exponent))
}

fn is_prime(x: u64) -> bool {
    matches!(prime_power(x), Some((_, 1)))
}

/// The triple (N, p, q): ring degree, plaintext modulus, ciphertext modulus.
///
/// `N` bounds the polynomial degree, `p` bounds plaintext coefficients and `q`
/// bounds ciphertext coefficients. Construction validates the whole triple, so
/// a `RingParams` value is always usable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingParams {
    n: usize,
    p: u64,
    q: u64,
    p_prime: u64,
    p_exponent: u32,
    q_prime: u64,
    q_exponent: u32,
}

impl RingParams {
    /// Validate and construct ring parameters.
    ///
    /// Requires N >= 2 (x^1 - 1 collapses the ring), 2 <= p < q <= 2^31,
    /// GCD(p, q) = 1, and both moduli prime powers (covering the usual
    /// q = 2^k as well as prime p or q). Key generation inverts the secret
    /// modulo each of them, and inversion modulo a general composite is
    /// unsupported.
    pub fn new(n: usize, p: u64, q: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRingParams(format!(
                "N must be at least 2, got {n}"
            )));
        }
        if p < 2 {
            return Err(Error::InvalidRingParams(format!(
                "p must be at least 2, got {p}"
            )));
        }
        if q <= p {
            return Err(Error::InvalidRingParams(format!(
                "q must exceed p, got p={p}, q={q}"
            )));
        }
        if q > MAX_MODULUS {
            return Err(Error::InvalidRingParams(format!(
                "q must be at most 2^31, got {q}"
            )));
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidRingParams(format!(
                "GCD(p, q) = 1 is required, got GCD({p}, {q}) = {}",
                gcd(p, q)
            )));
        }
        let Some((p_prime, p_exponent)) = prime_power(p) else {
            return Err(Error::InvalidRingParams(format!(
                "p must be a prime power, got {p}"
            )));
        };
        let Some((q_prime, q_exponent)) = prime_power(q) else {
            return Err(Error::InvalidRingParams(format!(
                "q must be a prime power, got {q}"
            )));
        };
        Ok(Self {
            n,
            p,
            q,
            p_prime,
            p_exponent,
            q_prime,
            q_exponent,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The (prime, exponent) decomposition of p.
    pub fn p_prime_power(&self) -> (u64, u32) {
        (self.p_prime, self.p_exponent)
    }

    /// The (prime, exponent) decomposition of q.
    pub fn q_prime_power(&self) -> (u64, u32) {
        (self.q_prime, self.q_exponent)
    }
}

/// A polynomial as a coefficient vector; index `i` holds the coefficient of
/// `x^i`. The length fixes N and is never truncated or extended implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    pub fn new(coeffs: Vec<i64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a polynomial needs at least one coefficient"
        );
        Self { coeffs }
    }

    /// The zero polynomial of length `n`.
    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// The multiplicative identity of length `n`.
    pub fn one(n: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[0] = 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    #[allow(clippy::len_without_is_empty)] // length is fixed at construction, never zero
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Sum of absolute coefficient values.
    pub fn one_norm(&self) -> u64 {
        self.coeffs.iter().map(|&c| c.unsigned_abs()).sum()
    }

    /// Largest absolute coefficient value.
    pub fn max_norm(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|&c| c.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    fn check_same_len(&self, other: &Poly) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.len())
    }

    /// Coefficient-wise sum without reduction.
    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_same_len(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Poly::new(coeffs))
    }

    /// Coefficient-wise sum with every coefficient reduced into [0, modulus).
    pub fn add_mod(&self, other: &Poly, modulus: u64) -> Result<Poly> {
        let m = modulus_i64(modulus);
        self.check_same_len(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.rem_euclid(m) + b.rem_euclid(m)).rem_euclid(m))
            .collect();
        Ok(Poly::new(coeffs))
    }

    /// Coefficient-wise difference reduced into [0, modulus).
    pub fn sub_mod(&self, other: &Poly, modulus: u64) -> Result<Poly> {
        let m = modulus_i64(modulus);
        self.check_same_len(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.rem_euclid(m) - b.rem_euclid(m)).rem_euclid(m))
            .collect();
        Ok(Poly::new(coeffs))
    }

    /// Multiply every coefficient by `scalar`, reduced into [0, modulus).
    pub fn scalar_mul_mod(&self, scalar: u64, modulus: u64) -> Poly {
        let m = modulus_i64(modulus);
        let s = (scalar % modulus) as i64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| (c.rem_euclid(m) * s).rem_euclid(m))
            .collect();
        Poly::new(coeffs)
    }

    /// Cyclic convolution modulo `modulus`: the product in
    /// Z_modulus\[x\]/(x^N - 1), computed with the naive double loop.
    pub fn convolve(&self, other: &Poly, modulus: u64) -> Result<Poly> {
        let m = modulus_i64(modulus);
        let n = self.check_same_len(other)?;
        let a: Vec<i64> = self.coeffs.iter().map(|c| c.rem_euclid(m)).collect();
        let b: Vec<i64> = other.coeffs.iter().map(|c| c.rem_euclid(m)).collect();
        let mut out = vec![0i64; n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let mut k = i + j;
                if k >= n {
                    k -= n;
                }
                out[k] = (out[k] + ai * bj) % m;
            }
        }
        Ok(Poly::new(out))
    }

    /// Reduce every coefficient into [0, modulus).
    pub fn reduce_mod(&self, modulus: u64) -> Poly {
        let m = modulus_i64(modulus);
        Poly::new(self.coeffs.iter().map(|c| c.rem_euclid(m)).collect())
    }

    /// Map every coefficient to its centered representative: (-m/2, m/2] for
    /// even m, [-(m-1)/2, (m-1)/2] for odd m.
    pub fn centered_lift(&self, modulus: u64) -> Poly {
        let m = modulus_i64(modulus);
        let half = m / 2; // for odd m this is (m-1)/2
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c.rem_euclid(m);
                if v > half {
                    v - m
                } else {
                    v
                }
            })
            .collect();
        Poly::new(coeffs)
    }

    /// Inverse in Z_prime\[x\]/(x^N - 1) via the extended Euclidean algorithm
    /// applied to (self, x^N - 1) over the field Z_prime.
    pub fn inverse_mod_prime(&self, prime: u64) -> Result<Poly> {
        let p = modulus_i64(prime);
        assert!(is_prime(prime), "modulus {prime} must be prime");
        let n = self.len();
        assert!(n >= 2, "inversion needs ring degree N >= 2");

        // r0 = x^N - 1, r1 = self mod prime; s tracks the cofactor of self.
        let mut r0 = vec![0i64; n + 1];
        r0[0] = p - 1;
        r0[n] = 1;
        let mut r1 = trim(self.coeffs.iter().map(|c| c.rem_euclid(p)).collect());
        if r1.is_empty() {
            return Err(Error::NotInvertible { modulus: prime });
        }
        let mut s0: Vec<i64> = Vec::new();
        let mut s1: Vec<i64> = vec![1];
        while !r1.is_empty() {
            let (quot, rem) = zp_divmod(&r0, &r1, p);
            let s_next = zp_sub(&s0, &zp_mul(&quot, &s1, p), p);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s_next;
        }
        // invertible iff gcd(self, x^N - 1) is a nonzero constant
        if r0.len() != 1 {
            return Err(Error::NotInvertible { modulus: prime });
        }
        let scale = int_inverse(r0[0], p).expect("nonzero constant is a unit mod a prime");
        let mut out = vec![0i64; n];
        for (i, &v) in s0.iter().enumerate() {
            let k = i % n;
            out[k] = (out[k] + v * scale).rem_euclid(p);
        }
        Ok(Poly::new(out))
    }

    /// Inverse in Z_q\[x\]/(x^N - 1) for q = prime^exponent: the mod-prime
    /// inverse lifted by Newton iteration (b <- b(2 - ab)), doubling the
    /// exponent until it reaches q.
    pub fn inverse_mod_prime_power(&self, prime: u64, exponent: u32) -> Result<Poly> {
        assert!(exponent >= 1, "exponent must be at least 1");
        let q = prime
            .checked_pow(exponent)
            .filter(|&q| q <= MAX_MODULUS)
            .unwrap_or_else(|| panic!("{prime}^{exponent} exceeds 2^31"));
        let mut inv = self.inverse_mod_prime(prime)?;
        let mut e = 1;
        while e < exponent {
            e = (2 * e).min(exponent);
            let m = prime.pow(e);
            let t = self.convolve(&inv, m)?;
            let mut two = vec![0i64; self.len()];
            two[0] = 2;
            let correction = Poly::new(two).sub_mod(&t, m)?;
            inv = inv.convolve(&correction, m)?;
        }
        debug_assert!(self.convolve(&inv, q).unwrap() == Poly::one(self.len()));
        Ok(inv)
    }
}

impl From<Vec<i64>> for Poly {
    fn from(coeffs: Vec<i64>) -> Self {
        Poly::new(coeffs)
    }
}

// --- helpers over Z_p[x] as trimmed little-endian coefficient vectors ---

fn trim(mut a: Vec<i64>) -> Vec<i64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn zp_divmod(num: &[i64], den: &[i64], p: i64) -> (Vec<i64>, Vec<i64>) {
    debug_assert!(!den.is_empty());
    let inv_lead = int_inverse(den[den.len() - 1], p).expect("leading coefficient is a unit");
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len().saturating_sub(den.len()) + 1];
    while rem.len() >= den.len() {
        let d = rem.len() - den.len();
        let c = (rem[rem.len() - 1] * inv_lead).rem_euclid(p);
        quot[d] = c;
        for (i, &dv) in den.iter().enumerate() {
            rem[i + d] = (rem[i + d] - c * dv).rem_euclid(p);
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn zp_mul(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &av) in a.iter().enumerate() {
        for (j, &bv) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + av * bv).rem_euclid(p);
        }
    }
    trim(out)
}

fn zp_sub(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let n = a.len().max(b.len());
    let mut out = vec![0i64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let av = a.get(i).copied().unwrap_or(0);
        let bv = b.get(i).copied().unwrap_or(0);
        *slot = (av - bv).rem_euclid(p);
    }
    trim(out)
}

fn int_inverse(a: i64, m: i64) -> Option<i64> {
    let a = a.rem_euclid(m);
    let (mut r0, mut r1) = (m, a);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m))
}
