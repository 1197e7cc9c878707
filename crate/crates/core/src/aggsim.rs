//! In-process multi-party aggregation simulator: n clients encrypt integer
//! vectors under one public key, an aggregator that never holds the private
//! key sums the ciphertexts blockwise, and the key holder decrypts only the
//! total.
//!
//! The aggregator boundary is enforced by signature: [`aggregate_encrypted`]
//! is the only combining step and it takes ciphertexts alone, so aggregator
//! code cannot reference private-key material. Everything is in-process and
//! deterministic per seed; no transport, dropout handling or differential
//! privacy is simulated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::ahe::{aggregate, capacity, decrypt_sum, AggregateCiphertext};
use crate::error::{Error, Result};
use crate::ntru::{encrypt, keygen, Ciphertext, Plaintext, PrivateKey, PublicKey, SamplingSpec};
use crate::ring::{Poly, RingParams};

/// Simulation shape: party count, per-party vector length, ring and sampling
/// parameters, and the seed that fixes keys, vectors and blinding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub parties: u32,
    pub vector_length: usize,
    pub params: RingParams,
    pub spec: SamplingSpec,
    pub seed: u64,
    /// Run even when `parties` exceeds the guaranteed capacity.
    pub force: bool,
}

/// Everything the simulation produced, plus the clear-computed expectation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimReport {
    pub config: SimConfig,
    pub party_vectors: Vec<Vec<i64>>,
    pub aggregate_blocks: Vec<AggregateCiphertext>,
    pub decrypted_sum: Vec<i64>,
    pub expected_sum: Vec<i64>,
    pub matches: bool,
    /// capacity minus parties; negative when forced past the bound.
    pub capacity_headroom: i64,
}

impl SimReport {
    /// Stable `key=value` text form, one entry per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let cfg = &self.config;
        out.push_str(&format!("parties={}\n", cfg.parties));
        out.push_str(&format!("vector_length={}\n", cfg.vector_length));
        out.push_str(&format!("n={}\n", cfg.params.n()));
        out.push_str(&format!("p={}\n", cfg.params.p()));
        out.push_str(&format!("q={}\n", cfg.params.q()));
        out.push_str(&format!(
            "d_f={} d_g={} d_r={}\n",
            cfg.spec.d_f, cfg.spec.d_g, cfg.spec.d_r
        ));
        out.push_str(&format!("seed={}\n", cfg.seed));
        out.push_str(&format!("capacity_headroom={}\n", self.capacity_headroom));
        for (index, vector) in self.party_vectors.iter().enumerate() {
            out.push_str(&format!("party_vector_{index}={}\n", join(vector)));
        }
        for (index, block) in self.aggregate_blocks.iter().enumerate() {
            out.push_str(&format!(
                "aggregate_block_{index}={}\n",
                join(block.poly().coeffs())
            ));
        }
        out.push_str(&format!("decrypted_sum={}\n", join(&self.decrypted_sum)));
        out.push_str(&format!("expected_sum={}\n", join(&self.expected_sum)));
        out.push_str(&format!("match={}\n", self.matches));
        out
    }
}

fn join(values: &[i64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn center_scalar(value: i64, p: u64) -> i64 {
    let m = p as i64;
    let v = value.rem_euclid(m);
    let half = m / 2;
    if v > half {
        v - m
    } else {
        v
    }
}

/// Element-wise integer sum reduced to centered form mod p. This is the
/// independent expectation the encrypted pipeline is checked against.
pub fn clear_sum_oracle(vectors: &[Vec<i64>], p: u64) -> Result<Vec<i64>> {
    let (first, rest) = vectors.split_first().ok_or(Error::EmptyAggregate)?;
    let mut sums = first.clone();
    for vector in rest {
        if vector.len() != sums.len() {
            return Err(Error::DimensionMismatch {
                left: sums.len(),
                right: vector.len(),
            });
        }
        for (slot, v) in sums.iter_mut().zip(vector) {
            *slot += v;
        }
    }
    Ok(sums.into_iter().map(|v| center_scalar(v, p)).collect())
}

/// Blockwise sum of every party's ciphertext blocks. This is the aggregator
/// role: note the signature admits no key material at all.
pub fn aggregate_encrypted(
    per_party_blocks: &[Vec<Ciphertext>],
) -> Result<Vec<AggregateCiphertext>> {
    let (first, rest) = per_party_blocks
        .split_first()
        .ok_or(Error::EmptyAggregate)?;
    for blocks in rest {
        if blocks.len() != first.len() {
            return Err(Error::DimensionMismatch {
                left: first.len(),
                right: blocks.len(),
            });
        }
    }
    (0..first.len())
        .map(|index| {
            let column: Vec<Ciphertext> = per_party_blocks
                .iter()
                .map(|blocks| blocks[index].clone())
                .collect();
            aggregate(&column)
        })
        .collect()
}

/// Run the whole simulation from the seed: keygen, per-party vector sampling,
/// encryption, aggregation, sum-decryption and the clear-sum comparison.
pub fn run_simulation(config: &SimConfig) -> Result<SimReport> {
    config.spec.validate(&config.params)?;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let (private, public) = keygen(&config.params, &config.spec, &mut rng)?;
    let p = config.params.p();
    let half = (p / 2) as i64;
    let low = if p.is_multiple_of(2) {
        -half + 1
    } else {
        -half
    };
    let vectors: Vec<Vec<i64>> = (0..config.parties)
        .map(|_| {
            (0..config.vector_length)
                .map(|_| rng.random_range(low..=half))
                .collect()
        })
        .collect();
    run_simulation_with_keys(config, &private, &public, vectors, &mut rng)
}

/// Simulation core with caller-provided keys and party vectors; used by
/// deterministic tests and reference replays. `rng` drives the per-block
/// blinding polynomials.
pub fn run_simulation_with_keys<R: Rng + ?Sized>(
    config: &SimConfig,
    private: &PrivateKey,
    public: &PublicKey,
    party_vectors: Vec<Vec<i64>>,
    rng: &mut R,
) -> Result<SimReport> {
    if config.parties == 0 || config.vector_length == 0 {
        return Err(Error::InvalidSamplingSpec(
            "parties and vector length must both be at least 1".into(),
        ));
    }
    if party_vectors.len() != config.parties as usize {
        return Err(Error::DimensionMismatch {
            left: config.parties as usize,
            right: party_vectors.len(),
        });
    }
    let cap = match capacity(&config.params, &config.spec) {
        Ok(cap) => cap,
        Err(_) if config.force => 0,
        Err(err) => return Err(err),
    };
    if config.parties > cap && !config.force {
        return Err(Error::CapacityExceeded {
            summands: config.parties,
            capacity: cap,
        });
    }

    let n = config.params.n();
    let mut per_party_blocks = Vec::with_capacity(party_vectors.len());
    for vector in &party_vectors {
        if vector.len() != config.vector_length {
            return Err(Error::DimensionMismatch {
                left: config.vector_length,
                right: vector.len(),
            });
        }
        let mut blocks = Vec::with_capacity(vector.len().div_ceil(n));
        for chunk in vector.chunks(n) {
            let mut coeffs = chunk.to_vec();
            coeffs.resize(n, 0);
            let plaintext = Plaintext::new(Poly::new(coeffs), &config.params)?;
            blocks.push(encrypt(public, &plaintext, rng)?);
        }
        per_party_blocks.push(blocks);
    }

    let aggregate_blocks = aggregate_encrypted(&per_party_blocks)?;

    let mut decrypted_sum = Vec::with_capacity(config.vector_length);
    for block in &aggregate_blocks {
        let decrypted = decrypt_sum(private, block)?;
        decrypted_sum.extend_from_slice(decrypted.sum.poly().coeffs());
    }
    decrypted_sum.truncate(config.vector_length);

    let expected_sum = clear_sum_oracle(&party_vectors, config.params.p())?;
    let matches = decrypted_sum == expected_sum;
    Ok(SimReport {
        config: *config,
        party_vectors,
        aggregate_blocks,
        decrypted_sum,
        expected_sum,
        matches,
        capacity_headroom: cap as i64 - config.parties as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntru::keygen_from_secrets;

    fn demo_params() -> RingParams {
        RingParams::new(7, 3, 128).unwrap()
    }

    fn demo_spec() -> SamplingSpec {
        SamplingSpec::new(2, 2, 2)
    }

    fn demo_config(parties: u32, vector_length: usize, seed: u64) -> SimConfig {
        SimConfig {
            parties,
            vector_length,
            params: demo_params(),
            spec: demo_spec(),
            seed,
            force: false,
        }
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

    #[test]
    fn reference_two_party_sum() {
        let (private, public) = demo_keys();
        let vectors = vec![vec![1, 1, 0, 0, 0, 0, 0], vec![0, 0, 1, 0, 0, 0, 0]];
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let report =
            run_simulation_with_keys(&demo_config(2, 7, 5), &private, &public, vectors, &mut rng)
                .unwrap();
        assert_eq!(report.decrypted_sum, vec![1, 1, 1, 0, 0, 0, 0]);
        assert!(report.matches);
        assert_eq!(report.capacity_headroom, 1);
        assert_eq!(report.aggregate_blocks[0].summands(), 2);
    }

    #[test]
    fn single_party_sum_is_the_vector() {
        let report = run_simulation(&demo_config(1, 7, 11)).unwrap();
        assert_eq!(report.decrypted_sum, report.party_vectors[0]);
        assert!(report.matches);
    }

    #[test]
    fn all_ones_wrap_to_zero() {
        let (private, public) = demo_keys();
        let vectors = vec![vec![1; 7]; 3];
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let report =
            run_simulation_with_keys(&demo_config(3, 7, 13), &private, &public, vectors, &mut rng)
                .unwrap();
        assert_eq!(report.decrypted_sum, vec![0; 7]);
        assert!(report.matches);
    }

    #[test]
    fn long_vectors_span_blocks() {
        let report = run_simulation(&demo_config(2, 20, 21)).unwrap();
        assert_eq!(report.aggregate_blocks.len(), 3);
        assert_eq!(report.decrypted_sum.len(), 20);
        assert!(report.matches);
    }

    #[test]
    fn clear_sum_oracle_examples() {
        assert_eq!(
            clear_sum_oracle(&[vec![1, 1], vec![0, 2]], 3).unwrap(),
            vec![1, 0]
        );
        assert_eq!(
            clear_sum_oracle(&[vec![0, 2, -1]], 3).unwrap(),
            vec![0, -1, -1]
        );
        assert!(matches!(
            clear_sum_oracle(&[vec![1], vec![1, 2]], 3),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            clear_sum_oracle(&[], 3),
            Err(Error::EmptyAggregate)
        ));
    }

    #[test]
    fn matches_oracle_across_seeds() {
        for seed in 0..100 {
            let report = run_simulation(&demo_config(3, 10, seed)).unwrap();
            assert!(report.matches, "seed {seed}");
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let config = demo_config(3, 12, 77);
        let first = run_simulation(&config).unwrap();
        let second = run_simulation(&config).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.to_text(), second.to_text());

        let other_seed = run_simulation(&demo_config(3, 12, 78)).unwrap();
        assert_ne!(first.to_text(), other_seed.to_text());
    }

    #[test]
    fn refuses_over_capacity_without_force() {
        let err = run_simulation(&demo_config(4, 7, 1)).unwrap_err();
        assert!(matches!(
            err,
            Error::CapacityExceeded {
                summands: 4,
                capacity: 3
            }
        ));

        let mut forced = demo_config(4, 7, 1);
        forced.force = true;
        let report = run_simulation(&forced).unwrap();
        assert_eq!(report.capacity_headroom, -1);
    }

    #[test]
    fn aggregator_input_validation() {
        assert!(matches!(
            aggregate_encrypted(&[]),
            Err(Error::EmptyAggregate)
        ));
        let (_, public) = demo_keys();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let block = encrypt(&public, &Plaintext::zero(&demo_params()), &mut rng).unwrap();
        let ragged = vec![vec![block.clone(), block.clone()], vec![block]];
        assert!(matches!(
            aggregate_encrypted(&ragged),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn report_text_is_complete() {
        let report = run_simulation(&demo_config(2, 7, 3)).unwrap();
        let text = report.to_text();
        assert!(text.contains("parties=2\n"));
        assert!(text.contains("match=true\n"));
        assert!(text.contains("party_vector_1="));
        assert!(text.contains("aggregate_block_0="));
    }
}
