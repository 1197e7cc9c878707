//! Additive homomorphic layer: ciphertext addition, n-party aggregation,
//! sum-decryption, and the noise capacity bound that keeps sums decryptable.
//!
//! Ciphertext sums decrypt to the coefficient-wise sum of the underlying
//! plaintexts *mod p*: the per-summand blinding terms all carry a factor of
//! p and vanish in the mod-p stage of decryption. Wraparound mod p is the
//! defined semantics: users summing counters must pick p larger than any sum
//! they care about.
//!
//! Correctness of the sum is only guaranteed while the accumulated noise
//! stays below q/2 coefficient-wise; [`capacity`] turns that condition into a
//! maximum summand count computable from public data.

use crate::error::{Error, Result};
use crate::ntru::{decrypt, Ciphertext, Plaintext, PrivateKey, SamplingSpec};
use crate::ring::RingParams;

/// A ciphertext holding the sum of one or more fresh encryptions; the
/// `summands` counter tracks how many.
pub type AggregateCiphertext = Ciphertext;

/// Coefficient-wise sum mod q. The summand counters add up.
pub fn ct_add(a: &Ciphertext, b: &Ciphertext) -> Result<AggregateCiphertext> {
    if a.params() != b.params() {
        return Err(Error::IncompatibleCiphertexts(format!(
            "parameters differ: (N={}, p={}, q={}) vs (N={}, p={}, q={})",
            a.params().n(),
            a.params().p(),
            a.params().q(),
            b.params().n(),
            b.params().p(),
            b.params().q()
        )));
    }
    let poly = a.poly().add_mod(b.poly(), a.params().q())?;
    Ciphertext::from_parts(poly, a.summands().saturating_add(b.summands()), *a.params())
}

/// Left-fold of [`ct_add`] over a non-empty collection.
pub fn aggregate(ciphertexts: &[Ciphertext]) -> Result<AggregateCiphertext> {
    let (first, rest) = ciphertexts.split_first().ok_or(Error::EmptyAggregate)?;
    rest.iter()
        .try_fold(first.clone(), |acc, ct| ct_add(&acc, ct))
}

/// Result of decrypting an aggregate: the summed plaintext plus a warning
/// flag when the summand count exceeded the guaranteed capacity. The bound is
/// conservative, so an over-capacity sum is often still correct; callers who
/// need certainty must stay within capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecryptedSum {
    pub sum: Plaintext,
    pub capacity_exceeded: bool,
}

/// Decrypt an aggregate to the centered mod-p sum of its constituent
/// plaintexts.
pub fn decrypt_sum(private: &PrivateKey, aggregate: &AggregateCiphertext) -> Result<DecryptedSum> {
    // Parameters that fail the capacity bound entirely count as capacity 0.
    let cap = capacity(private.params(), private.spec()).unwrap_or(0);
    let sum = decrypt(private, aggregate)?;
    Ok(DecryptedSum {
        sum,
        capacity_exceeded: aggregate.summands() > cap,
    })
}

/// Maximum number of summands with guaranteed exact sum-decryption.
///
/// Each summand contributes at most `B = p * ||g||_1 * ||r||_inf +
/// ||f||_1 * floor(p/2)` to any coefficient of the noise polynomial
/// `p*g*sum(r_s) + sum(m_s)*f`, with the norms read off the sampling counts
/// (`||g||_1 = 2*d_g`, `||r||_inf = 1`, `||f||_1 = 2*d_f + 1`). The centered
/// lift in decryption recovers that polynomial exactly while `n * B` stays
/// within `floor((q-1)/2)`, so `n_max = floor(floor((q-1)/2) / B)`.
///
/// Computed from public data only: verifiers hold the sampling counts, never
/// the secrets, and the discarded `g` is not available anyway.
pub fn capacity(params: &RingParams, spec: &SamplingSpec) -> Result<u32> {
    spec.validate(params)?;
    let g_norm = 2 * spec.d_g as u64;
    let f_norm = 2 * spec.d_f as u64 + 1;
    let bound = params.p() * g_norm + f_norm * (params.p() / 2);
    let half_q = (params.q() - 1) / 2;
    if bound >= half_q {
        return Err(Error::ParameterTooTight { bound, half_q });
    }
    Ok((half_q / bound) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntru::{encrypt, keygen, keygen_from_secrets};
    use crate::ring::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    const C1: [i64; 7] = [98, 18, 58, 119, 126, 82, 13];
    const C2: [i64; 7] = [20, 52, 123, 123, 85, 16, 94];
    const C_SUM: [i64; 7] = [118, 70, 53, 114, 83, 98, 107];

    fn demo_params() -> RingParams {
        RingParams::new(7, 3, 128).unwrap()
    }

    fn demo_spec() -> SamplingSpec {
        SamplingSpec::new(2, 2, 2)
    }

    fn demo_keys() -> (PrivateKey, crate::ntru::PublicKey) {
        keygen_from_secrets(
            &demo_params(),
            &demo_spec(),
            Poly::new(vec![1, -1, 1, 0, 0, -1, 1]),
            Poly::new(vec![-1, 1, -1, 1, 0, 0, 0]),
        )
        .unwrap()
    }

    fn ct(coeffs: &[i64]) -> Ciphertext {
        Ciphertext::from_parts(Poly::new(coeffs.to_vec()), 1, demo_params()).unwrap()
    }

    fn random_plaintext<R: Rng>(params: &RingParams, rng: &mut R) -> Plaintext {
        let coeffs = (0..params.n()).map(|_| rng.random_range(-1..=1)).collect();
        Plaintext::new(Poly::new(coeffs), params).unwrap()
    }

    fn clear_sum(plaintexts: &[Plaintext], params: &RingParams) -> Poly {
        let mut acc = Poly::zero(params.n());
        for m in plaintexts {
            acc = acc.add(m.poly()).unwrap();
        }
        acc.centered_lift(params.p())
    }

    #[test]
    fn ct_add_reference_vector() {
        let sum = ct_add(&ct(&C1), &ct(&C2)).unwrap();
        assert_eq!(sum.poly(), &Poly::new(C_SUM.to_vec()));
        assert_eq!(sum.summands(), 2);
    }

    #[test]
    fn ct_add_commutes() {
        assert_eq!(
            ct_add(&ct(&C1), &ct(&C2)).unwrap(),
            ct_add(&ct(&C2), &ct(&C1)).unwrap()
        );
    }

    #[test]
    fn ct_add_rejects_mismatched_parameters() {
        let other_params = RingParams::new(7, 3, 256).unwrap();
        let other = Ciphertext::from_parts(Poly::new(C2.to_vec()), 1, other_params).unwrap();
        assert!(matches!(
            ct_add(&ct(&C1), &other),
            Err(Error::IncompatibleCiphertexts(_))
        ));
    }

    #[test]
    fn adding_encryption_of_zero_preserves_plaintext() {
        let (private, public) = demo_keys();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let m = random_plaintext(&demo_params(), &mut rng);
        let c = encrypt(&public, &m, &mut rng).unwrap();
        let zero_ct = encrypt(&public, &Plaintext::zero(&demo_params()), &mut rng).unwrap();
        let sum = decrypt_sum(&private, &ct_add(&c, &zero_ct).unwrap()).unwrap();
        assert_eq!(sum.sum.poly(), m.poly());
        assert!(!sum.capacity_exceeded);
    }

    #[test]
    fn aggregate_matches_pairwise_add() {
        let via_fold = aggregate(&[ct(&C1), ct(&C2)]).unwrap();
        let via_add = ct_add(&ct(&C1), &ct(&C2)).unwrap();
        assert_eq!(via_fold, via_add);
    }

    #[test]
    fn aggregate_singleton_is_identity() {
        let agg = aggregate(&[ct(&C1)]).unwrap();
        assert_eq!(agg.poly(), &Poly::new(C1.to_vec()));
        assert_eq!(agg.summands(), 1);
    }

    #[test]
    fn aggregate_is_order_independent() {
        let (_, public) = demo_keys();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let cts: Vec<Ciphertext> = (0..3)
            .map(|_| {
                let m = random_plaintext(&demo_params(), &mut rng);
                encrypt(&public, &m, &mut rng).unwrap()
            })
            .collect();
        let forward = aggregate(&cts).unwrap();
        let reversed: Vec<Ciphertext> = cts.iter().rev().cloned().collect();
        assert_eq!(forward, aggregate(&reversed).unwrap());
        let rotated = vec![cts[2].clone(), cts[0].clone(), cts[1].clone()];
        assert_eq!(forward, aggregate(&rotated).unwrap());
    }

    #[test]
    fn aggregate_rejects_empty_input() {
        assert!(matches!(aggregate(&[]), Err(Error::EmptyAggregate)));
    }

    #[test]
    fn decrypt_sum_reference_vector() {
        let (private, _) = demo_keys();
        let agg = Ciphertext::from_parts(Poly::new(C_SUM.to_vec()), 2, demo_params()).unwrap();
        let result = decrypt_sum(&private, &agg).unwrap();
        assert_eq!(result.sum.poly(), &Poly::new(vec![1, 1, 1, 0, 0, 0, 0]));
        assert!(!result.capacity_exceeded);
    }

    #[test]
    fn sum_of_zero_encryptions_is_zero() {
        let (private, public) = demo_keys();
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let cts: Vec<Ciphertext> = (0..3)
            .map(|_| encrypt(&public, &Plaintext::zero(&demo_params()), &mut rng).unwrap())
            .collect();
        let sum = decrypt_sum(&private, &aggregate(&cts).unwrap()).unwrap();
        assert!(sum.sum.poly().is_zero());
    }

    #[test]
    fn constant_ones_wrap_mod_p() {
        // 1 + 1 + 1 = 3 = 0 (mod 3): wraparound is the defined semantics
        let (private, public) = demo_keys();
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let one = Plaintext::new(Poly::one(7), &demo_params()).unwrap();
        let cts: Vec<Ciphertext> = (0..3)
            .map(|_| encrypt(&public, &one, &mut rng).unwrap())
            .collect();
        let sum = decrypt_sum(&private, &aggregate(&cts).unwrap()).unwrap();
        assert!(sum.sum.poly().is_zero());
    }

    #[test]
    fn capacity_reference_arithmetic() {
        assert_eq!(capacity(&demo_params(), &demo_spec()).unwrap(), 3);
        let wider = RingParams::new(7, 3, 256).unwrap();
        assert_eq!(capacity(&wider, &demo_spec()).unwrap(), 7);
    }

    #[test]
    fn capacity_rejects_tight_parameters() {
        let params = RingParams::new(167, 3, 128).unwrap();
        let spec = SamplingSpec::new(20, 20, 20);
        assert!(matches!(
            capacity(&params, &spec),
            Err(Error::ParameterTooTight {
                bound: 161,
                half_q: 63
            })
        ));
        // widening q makes the same counts viable
        let wide = RingParams::new(167, 3, 2048).unwrap();
        assert_eq!(capacity(&wide, &spec).unwrap(), 6);
    }

    #[test]
    fn over_capacity_sum_carries_warning() {
        let (private, public) = demo_keys();
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let cts: Vec<Ciphertext> = (0..4)
            .map(|_| {
                let m = random_plaintext(&demo_params(), &mut rng);
                encrypt(&public, &m, &mut rng).unwrap()
            })
            .collect();
        let result = decrypt_sum(&private, &aggregate(&cts).unwrap()).unwrap();
        assert!(result.capacity_exceeded);
    }

    #[test]
    fn sum_is_independent_of_blinding() {
        // re-encrypting the same plaintexts under fresh randomness must give
        // the identical decrypted sum
        let (private, public) = demo_keys();
        let mut setup_rng = ChaCha20Rng::seed_from_u64(41);
        let plaintexts: Vec<Plaintext> = (0..3)
            .map(|_| random_plaintext(&demo_params(), &mut setup_rng))
            .collect();

        let decrypt_with_seed = |seed: u64| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let cts: Vec<Ciphertext> = plaintexts
                .iter()
                .map(|m| encrypt(&public, m, &mut rng).unwrap())
                .collect();
            decrypt_sum(&private, &aggregate(&cts).unwrap()).unwrap()
        };
        let first = decrypt_with_seed(100);
        let second = decrypt_with_seed(200);
        assert_eq!(first.sum, second.sum);
        assert_eq!(first.sum.poly(), &clear_sum(&plaintexts, &demo_params()));
    }

    #[test]
    fn randomized_sums_match_clear_oracle() {
        let params = demo_params();
        let spec = demo_spec();
        let mut rng = ChaCha20Rng::seed_from_u64(57);
        let (private, public) = keygen(&params, &spec, &mut rng).unwrap();
        let cap = capacity(&params, &spec).unwrap();
        for _ in 0..200 {
            let n = rng.random_range(1..=cap);
            let plaintexts: Vec<Plaintext> = (0..n)
                .map(|_| random_plaintext(&params, &mut rng))
                .collect();
            let cts: Vec<Ciphertext> = plaintexts
                .iter()
                .map(|m| encrypt(&public, m, &mut rng).unwrap())
                .collect();
            let got = decrypt_sum(&private, &aggregate(&cts).unwrap()).unwrap();
            assert!(!got.capacity_exceeded);
            assert_eq!(got.sum.poly(), &clear_sum(&plaintexts, &params));
        }
    }
}
