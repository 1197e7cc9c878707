//! Built-in reference vectors at the demo parameter set (N=7, p=3, q=128)
//! plus the toy RSA baseline, with a self-check runner.
//!
//! These are the scheme's known-answer vectors: fixed secrets and blinding
//! polynomials with every intermediate value frozen. `run_all` recomputes the
//! whole pipeline through the public API and reports one pass/fail entry per
//! value; the CLI `vectors` subcommand and CI gate on it.

use crate::ahe::{ct_add, decrypt_sum};
use crate::codec::poly_to_text;
use crate::error::Result;
use crate::ntru::{
    decrypt, encrypt_with_blinding, keygen_from_secrets, Ciphertext, Plaintext, PrivateKey,
    PublicKey, SamplingSpec,
};
use crate::ring::{Poly, RingParams};
use crate::rsa_mhe::{self, RsaKeys};

/// Outcome of a single reference-vector comparison.
#[derive(Debug, Clone)]
pub struct VectorCheck {
    pub name: &'static str,
    pub passed: bool,
    /// `expected ... / actual ...` comparison, useful when a check fails.
    pub detail: String,
}

/// Demo ring: N=7, p=3, q=128.
pub fn demo_params() -> RingParams {
    RingParams::new(7, 3, 128).expect("demo parameters are valid")
}

/// Demo sampling counts: d_f = d_g = d_r = 2.
pub fn demo_spec() -> SamplingSpec {
    SamplingSpec::new(2, 2, 2)
}

fn demo_f() -> Poly {
    Poly::new(vec![1, -1, 1, 0, 0, -1, 1])
}

fn demo_g() -> Poly {
    Poly::new(vec![-1, 1, -1, 1, 0, 0, 0])
}

fn demo_r1() -> Poly {
    Poly::new(vec![-1, 0, 0, 1, -1, 1, 0])
}

fn demo_r2() -> Poly {
    Poly::new(vec![0, 1, 0, 1, 0, -1, -1])
}

fn demo_m1() -> Plaintext {
    Plaintext::new(Poly::new(vec![1, 1, 0, 0, 0, 0, 0]), &demo_params()).expect("in range")
}

fn demo_m2() -> Plaintext {
    Plaintext::new(Poly::new(vec![0, 0, 1, 0, 0, 0, 0]), &demo_params()).expect("in range")
}

/// The fixed demo key pair derived from the reference secrets.
pub fn demo_keys() -> (PrivateKey, PublicKey) {
    keygen_from_secrets(&demo_params(), &demo_spec(), demo_f(), demo_g())
        .expect("reference secrets are invertible")
}

/// First reference ciphertext (message x + 1 under blinding r1).
pub fn reference_ciphertext_1() -> Ciphertext {
    let (_, public) = demo_keys();
    encrypt_with_blinding(&public, &demo_m1(), &demo_r1()).expect("reference inputs are valid")
}

/// Second reference ciphertext (message x^2 under blinding r2).
pub fn reference_ciphertext_2() -> Ciphertext {
    let (_, public) = demo_keys();
    encrypt_with_blinding(&public, &demo_m2(), &demo_r2()).expect("reference inputs are valid")
}

/// Demo RSA keys (primes 17 and 23).
pub fn demo_rsa_keys() -> RsaKeys {
    RsaKeys::from_primes(17, 23).expect("demo primes are valid")
}

fn check_poly(name: &'static str, expected: &str, actual: &Poly) -> VectorCheck {
    let actual = poly_to_text(actual);
    VectorCheck {
        name,
        passed: actual == expected,
        detail: format!("expected {expected} / actual {actual}"),
    }
}

fn check_value(name: &'static str, expected: u64, actual: u64) -> VectorCheck {
    VectorCheck {
        name,
        passed: actual == expected,
        detail: format!("expected {expected} / actual {actual}"),
    }
}

/// Recompute every reference value through the public API and compare.
pub fn run_all() -> Result<Vec<VectorCheck>> {
    let params = demo_params();
    let (private, public) = demo_keys();
    let mut checks = vec![
        check_poly("text_encoding_f", "1||-1||1||0||0||-1||1", private.f()),
        check_poly("private_f_p", "0||2||0||0||1||0||1", private.f_p()),
        check_poly("private_f_q", "87||58||81||54||36||67||2", private.f_q()),
        check_poly("public_h", "12||94||20||56||123||124||83", public.h()),
    ];

    let c1 = encrypt_with_blinding(&public, &demo_m1(), &demo_r1())?;
    checks.push(check_poly(
        "ciphertext_1",
        "98||18||58||119||126||82||13",
        c1.poly(),
    ));

    let t = c1.poly().convolve(private.f(), params.q())?;
    checks.push(check_poly(
        "decrypt_stage_t",
        "127||0||3||123||6||118||9",
        &t,
    ));
    checks.push(check_poly(
        "decrypt_stage_tau",
        "2||0||0||1||0||2||0",
        &t.centered_lift(params.q()).reduce_mod(params.p()),
    ));
    checks.push(check_poly(
        "decrypt_message_1",
        "1||1||0||0||0||0||0",
        decrypt(&private, &c1)?.poly(),
    ));

    let c2 = encrypt_with_blinding(&public, &demo_m2(), &demo_r2())?;
    checks.push(check_poly(
        "ciphertext_2",
        "20||52||123||123||85||16||94",
        c2.poly(),
    ));

    let aggregate = ct_add(&c1, &c2)?;
    checks.push(check_poly(
        "ciphertext_sum",
        "118||70||53||114||83||98||107",
        aggregate.poly(),
    ));
    let sum = decrypt_sum(&private, &aggregate)?;
    checks.push(check_poly(
        "decrypted_sum",
        "1||1||1||0||0||0||0",
        sum.sum.poly(),
    ));

    let rsa = demo_rsa_keys();
    checks.push(check_value("rsa_modulus", 391, rsa.modulus()));
    checks.push(check_value("rsa_public_exponent", 3, rsa.public_exponent()));
    checks.push(check_value(
        "rsa_private_exponent",
        59,
        rsa.private_exponent(),
    ));
    let rsa_c1 = rsa_mhe::encrypt(&rsa, 11)?;
    let rsa_c2 = rsa_mhe::encrypt(&rsa, 13)?;
    checks.push(check_value("rsa_ciphertext_1", 158, rsa_c1));
    checks.push(check_value("rsa_ciphertext_2", 242, rsa_c2));
    let product = rsa_mhe::ct_mul(&rsa, &[rsa_c1, rsa_c2])?;
    checks.push(check_value("rsa_product", 309, product));
    checks.push(check_value(
        "rsa_decrypted_product",
        143,
        rsa_mhe::decrypt(&rsa, product)?,
    ));

    Ok(checks)
}
