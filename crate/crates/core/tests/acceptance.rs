//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its runtime when it completes. Every expected value is
//! exact; no tolerances apply anywhere.
//!
//! Criterion 9 (the CLI self-check) lives in the CLI crate's acceptance
//! tests, next to the binary it exercises.

use std::time::Instant;

use ntru_ahe::ahe::{aggregate, capacity, ct_add, decrypt_sum};
use ntru_ahe::codec::{
    deserialize_ciphertext, deserialize_private_key, deserialize_public_key, serialize_ciphertext,
    serialize_private_key, serialize_public_key,
};
use ntru_ahe::ntru::{
    decrypt, encrypt, encrypt_with_blinding, keygen, keygen_from_secrets, Ciphertext, Plaintext,
    PrivateKey, PublicKey, SamplingSpec,
};
use ntru_ahe::ring::{Poly, RingParams};
use ntru_ahe::rsa_mhe::{self, RsaKeys};
use ntru_ahe::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn report(criterion: &str, started: Instant) {
    println!("acceptance {criterion}: PASS ({:?})", started.elapsed());
}

fn demo_params() -> RingParams {
    RingParams::new(7, 3, 128).unwrap()
}

fn demo_spec() -> SamplingSpec {
    SamplingSpec::new(2, 2, 2)
}

fn demo_keys() -> (PrivateKey, PublicKey) {
    keygen_from_secrets(
        &demo_params(),
        &demo_spec(),
        Poly::new(vec![1, -1, 1, 0, 0, -1, 1]),
        Poly::new(vec![-1, 1, -1, 1, 0, 0, 0]),
    )
    .unwrap()
}

fn random_plaintext<R: Rng>(params: &RingParams, rng: &mut R) -> Plaintext {
    let coeffs = (0..params.n()).map(|_| rng.random_range(-1..=1)).collect();
    Plaintext::new(Poly::new(coeffs), params).unwrap()
}

#[test]
fn criterion_1_reference_vector_suite() {
    let started = Instant::now();
    let (private, public) = demo_keys();
    assert_eq!(private.f_p(), &Poly::new(vec![0, 2, 0, 0, 1, 0, 1]));
    assert_eq!(private.f_q(), &Poly::new(vec![87, 58, 81, 54, 36, 67, 2]));
    assert_eq!(public.h(), &Poly::new(vec![12, 94, 20, 56, 123, 124, 83]));

    let m = Plaintext::new(Poly::new(vec![1, 1, 0, 0, 0, 0, 0]), &demo_params()).unwrap();
    let r = Poly::new(vec![-1, 0, 0, 1, -1, 1, 0]);
    let c = encrypt_with_blinding(&public, &m, &r).unwrap();
    assert_eq!(c.poly(), &Poly::new(vec![98, 18, 58, 119, 126, 82, 13]));

    let t = c.poly().convolve(private.f(), 128).unwrap();
    assert_eq!(t, Poly::new(vec![127, 0, 3, 123, 6, 118, 9]));

    let recovered = decrypt(&private, &c).unwrap();
    assert_eq!(recovered.poly(), &Poly::new(vec![1, 1, 0, 0, 0, 0, 0]));
    report("1 reference vectors", started);
}

#[test]
fn criterion_2_additive_homomorphism_vectors() {
    let started = Instant::now();
    let (private, public) = demo_keys();
    let m1 = Plaintext::new(Poly::new(vec![1, 1, 0, 0, 0, 0, 0]), &demo_params()).unwrap();
    let m2 = Plaintext::new(Poly::new(vec![0, 0, 1, 0, 0, 0, 0]), &demo_params()).unwrap();
    let c1 = encrypt_with_blinding(&public, &m1, &Poly::new(vec![-1, 0, 0, 1, -1, 1, 0])).unwrap();
    let c2 = encrypt_with_blinding(&public, &m2, &Poly::new(vec![0, 1, 0, 1, 0, -1, -1])).unwrap();
    assert_eq!(c2.poly(), &Poly::new(vec![20, 52, 123, 123, 85, 16, 94]));

    let sum = ct_add(&c1, &c2).unwrap();
    assert_eq!(sum.poly(), &Poly::new(vec![118, 70, 53, 114, 83, 98, 107]));
    assert_eq!(sum.summands(), 2);

    let decrypted = decrypt_sum(&private, &sum).unwrap();
    assert!(!decrypted.capacity_exceeded);
    assert_eq!(decrypted.sum.poly(), &Poly::new(vec![1, 1, 1, 0, 0, 0, 0]));
    report("2 additive homomorphism vectors", started);
}

#[test]
fn criterion_3_rsa_baseline_vectors() {
    let started = Instant::now();
    let keys = RsaKeys::from_primes(17, 23).unwrap();
    assert_eq!(
        (
            keys.modulus(),
            keys.public_exponent(),
            keys.private_exponent()
        ),
        (391, 3, 59)
    );
    let c1 = rsa_mhe::encrypt(&keys, 11).unwrap();
    let c2 = rsa_mhe::encrypt(&keys, 13).unwrap();
    assert_eq!((c1, c2), (158, 242));
    let product = rsa_mhe::ct_mul(&keys, &[c1, c2]).unwrap();
    assert_eq!(product, 309);
    assert_eq!(rsa_mhe::decrypt(&keys, product).unwrap(), 143);
    report("3 rsa baseline vectors", started);
}

#[test]
fn criterion_4_homomorphism_property() {
    let started = Instant::now();

    // the tight set must be rejected outright
    let tight = RingParams::new(167, 3, 128).unwrap();
    assert!(matches!(
        capacity(&tight, &SamplingSpec::new(20, 20, 20)),
        Err(Error::ParameterTooTight { .. })
    ));

    // d=83 passes the sampling bound (2*83+1 = 167) but leaves f with no zero
    // coefficient, so f = all-ones mod 2, a divisor of x^167 - 1: keygen can
    // never succeed there
    let dense = SamplingSpec::new(83, 83, 83);
    let wide = RingParams::new(167, 3, 2048).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(0xDE4D);
    assert!(matches!(
        keygen(&wide, &dense, &mut rng),
        Err(Error::KeygenExhausted { .. })
    ));

    // config -> (params, spec, trials); d=82 is the largest count with a
    // generatable key, capacity floor(1023/657) = 1
    let configs = [
        (
            RingParams::new(7, 3, 128).unwrap(),
            SamplingSpec::new(2, 2, 2),
            6000u32,
        ),
        (
            RingParams::new(167, 3, 2048).unwrap(),
            SamplingSpec::new(20, 20, 20),
            3000,
        ),
        (
            RingParams::new(167, 3, 2048).unwrap(),
            SamplingSpec::new(82, 82, 82),
            1000,
        ),
    ];
    let mut total = 0u32;
    for (params, spec, trials) in configs {
        let cap = capacity(&params, &spec).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(0xACCE + params.n() as u64);
        let mut keys = keygen(&params, &spec, &mut rng).unwrap();
        for trial in 0..trials {
            // refresh keys periodically so the property is not tied to one pair
            if trial % 250 == 249 {
                keys = keygen(&params, &spec, &mut rng).unwrap();
            }
            let (ref private, ref public) = keys;
            let summands = rng.random_range(1..=cap);
            let plaintexts: Vec<Plaintext> = (0..summands)
                .map(|_| random_plaintext(&params, &mut rng))
                .collect();
            let ciphertexts: Vec<Ciphertext> = plaintexts
                .iter()
                .map(|m| encrypt(public, m, &mut rng).unwrap())
                .collect();
            let got = decrypt_sum(private, &aggregate(&ciphertexts).unwrap()).unwrap();
            assert!(!got.capacity_exceeded);

            let mut clear = Poly::zero(params.n());
            for m in &plaintexts {
                clear = clear.add(m.poly()).unwrap();
            }
            assert_eq!(
                got.sum.poly(),
                &clear.centered_lift(params.p()),
                "N={} trial {trial}",
                params.n()
            );
            total += 1;
        }
    }
    assert_eq!(total, 10_000);
    report("4 homomorphism property (10^4 trials)", started);
}

#[test]
fn criterion_5_roundtrip_property() {
    let started = Instant::now();
    let params = demo_params();
    let spec = demo_spec();
    let mut rng = ChaCha20Rng::seed_from_u64(0x5EED);
    let mut keys = keygen(&params, &spec, &mut rng).unwrap();
    for trial in 0..10_000u32 {
        if trial % 500 == 499 {
            keys = keygen(&params, &spec, &mut rng).unwrap();
        }
        let (ref private, ref public) = keys;
        let m = random_plaintext(&params, &mut rng);
        let ct = encrypt(public, &m, &mut rng).unwrap();
        assert_eq!(decrypt(private, &ct).unwrap(), m, "trial {trial}");
    }
    report("5 roundtrip property (10^4 trials)", started);
}

#[test]
fn criterion_6_inverse_oracle_equivalence() {
    let started = Instant::now();
    for p in [2i64, 3] {
        for n in 2..=4usize {
            // enumerate every polynomial over [0, p) at this degree
            let mut candidates = vec![vec![]];
            for _ in 0..n {
                candidates = candidates
                    .into_iter()
                    .flat_map(|prefix: Vec<i64>| {
                        (0..p).map(move |digit| {
                            let mut next = prefix.clone();
                            next.push(digit);
                            next
                        })
                    })
                    .collect();
            }
            let one = Poly::one(n);
            for coeffs in &candidates {
                let a = Poly::new(coeffs.clone());
                let euclid = a.inverse_mod_prime(p as u64).ok();
                let brute = candidates
                    .iter()
                    .map(|c| Poly::new(c.clone()))
                    .find(|cand| a.convolve(cand, p as u64).unwrap() == one);
                assert_eq!(euclid.is_some(), brute.is_some(), "{coeffs:?} mod {p}");
                if let (Some(e), Some(b)) = (euclid, brute) {
                    assert_eq!(e, b, "{coeffs:?} mod {p}");
                }
            }
        }
    }
    report("6 inverse oracle equivalence (exhaustive N<=4)", started);
}

#[test]
fn criterion_7_randomization() {
    let started = Instant::now();
    // needs a blinding space far beyond 1000: C(167,20)*C(147,20) >> 2^128.
    // (At the N=7 demo set only 210 blinding polynomials exist, so 1000
    // distinct ciphertexts are impossible there.)
    let params = RingParams::new(167, 3, 2048).unwrap();
    let spec = SamplingSpec::new(20, 20, 20);
    let mut rng = ChaCha20Rng::seed_from_u64(0xD15C);
    let (private, public) = keygen(&params, &spec, &mut rng).unwrap();
    let m = random_plaintext(&params, &mut rng);

    let mut seen = std::collections::HashSet::new();
    for _ in 0..1000 {
        let ct = encrypt(&public, &m, &mut rng).unwrap();
        assert_eq!(decrypt(&private, &ct).unwrap(), m);
        seen.insert(ct.poly().coeffs().to_vec());
    }
    assert_eq!(seen.len(), 1000);
    report("7 randomization (1000 distinct, all decrypt)", started);
}

#[test]
fn criterion_8_serialization() {
    let started = Instant::now();
    let params = demo_params();
    let spec = demo_spec();
    let mut rng = ChaCha20Rng::seed_from_u64(0x5E1A);
    for round in 0..1000u32 {
        let (private, public) = keygen(&params, &spec, &mut rng).unwrap();
        let private_bytes = serialize_private_key(&private);
        let public_bytes = serialize_public_key(&public);
        assert_eq!(deserialize_private_key(&private_bytes).unwrap(), private);
        assert_eq!(deserialize_public_key(&public_bytes).unwrap(), public);

        let m = random_plaintext(&params, &mut rng);
        let ct = encrypt(&public, &m, &mut rng).unwrap();
        let ct_bytes = serialize_ciphertext(&ct);
        assert_eq!(
            deserialize_ciphertext(&ct_bytes).unwrap(),
            ct,
            "round {round}"
        );
    }

    // documented corruption cases
    let (private, public) = demo_keys();
    let bytes = serialize_private_key(&private);

    let mut bad_magic = bytes.clone();
    bad_magic[0] ^= 0x55;
    assert!(matches!(
        deserialize_private_key(&bad_magic),
        Err(Error::DeserializeError { offset: 0, .. })
    ));

    let mut bad_version = bytes.clone();
    bad_version[8] = 0xfe;
    assert!(matches!(
        deserialize_private_key(&bad_version),
        Err(Error::DeserializeError { offset: 8, .. })
    ));

    let mut bad_role = bytes.clone();
    bad_role[9] = 0x07;
    assert!(matches!(
        deserialize_private_key(&bad_role),
        Err(Error::DeserializeError { offset: 9, .. })
    ));

    assert!(matches!(
        deserialize_private_key(&[]),
        Err(Error::DeserializeError { .. })
    ));
    assert!(matches!(
        deserialize_private_key(&bytes[..20]),
        Err(Error::DeserializeError { .. })
    ));

    let mut trailing = bytes.clone();
    trailing.extend_from_slice(&[0, 0]);
    assert!(matches!(
        deserialize_private_key(&trailing),
        Err(Error::DeserializeError { .. })
    ));

    // a private blob is not a public blob and vice versa
    assert!(matches!(
        deserialize_public_key(&bytes),
        Err(Error::DeserializeError { offset: 9, .. })
    ));
    assert!(matches!(
        deserialize_private_key(&serialize_public_key(&public)),
        Err(Error::DeserializeError { offset: 9, .. })
    ));

    // tampered key material fails the inverse-relation check
    let mut tampered = bytes.clone();
    let last = tampered.len() - 8;
    tampered[last] ^= 0x01;
    assert!(deserialize_private_key(&tampered).is_err());

    report("8 serialization (10^3 roundtrips + corruption)", started);
}
