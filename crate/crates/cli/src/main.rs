//! Command-line front end: key generation, file encryption and decryption,
//! ciphertext addition, capacity queries, demos, and the reference-vector
//! self-check.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags or invalid
//! parameters), 2 on crypto, parse, or I/O failures. Flags and file formats
//! are documented in `docs/cli.md` and `docs/formats.md`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use ntru_ahe::aggsim::{run_simulation, SimConfig};
use ntru_ahe::ahe;
use ntru_ahe::codec::{
    deserialize_ciphertext_stream, deserialize_private_key, deserialize_public_key, fingerprint,
    pack_bytes, poly_to_text, serialize_ciphertext, serialize_private_key, serialize_public_key,
    unpack_bytes,
};
use ntru_ahe::ntru::{decrypt, encrypt, keygen, Plaintext, SamplingSpec};
use ntru_ahe::ring::RingParams;
use ntru_ahe::rsa_mhe::{self, RsaKeys};
use ntru_ahe::vectors;
use ntru_ahe::Error;

#[derive(Parser)]
#[command(
    name = "ntru-ahe",
    version,
    about = "Additive homomorphic encryption over the NTRU convolution ring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Ring and sampling parameters shared by several subcommands.
#[derive(Args)]
struct ParamArgs {
    /// Ring degree N
    #[arg(long)]
    n: usize,
    /// Plaintext modulus p
    #[arg(long)]
    p: u64,
    /// Ciphertext modulus q (prime power, coprime to p)
    #[arg(long)]
    q: u64,
    /// Count of -1 coefficients in the secret f (it gets df+1 of +1)
    #[arg(long)]
    df: u32,
    /// Count of each sign in the key-blinding polynomial g
    #[arg(long)]
    dg: u32,
    /// Count of each sign in the per-encryption blinding polynomial r
    #[arg(long)]
    dr: u32,
}

impl ParamArgs {
    fn parse(&self) -> Result<(RingParams, SamplingSpec), CliError> {
        let params = RingParams::new(self.n, self.p, self.q).map_err(usage)?;
        let spec = SamplingSpec::new(self.df, self.dg, self.dr);
        spec.validate(&params).map_err(usage)?;
        Ok((params, spec))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair and write <prefix>.priv and <prefix>.pub
    Keygen {
        #[command(flatten)]
        params: ParamArgs,
        /// Deterministic seed (demo/test only; omit for a secure generator)
        #[arg(long)]
        seed: Option<u64>,
        /// Path prefix for the two key files
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Encrypt a file under a public key (packs bytes into plaintext blocks)
    Encrypt {
        /// Public key file
        #[arg(long = "pub")]
        public: PathBuf,
        /// Input file to encrypt
        #[arg(long = "in")]
        input: PathBuf,
        /// Output ciphertext file
        #[arg(long)]
        out: PathBuf,
        /// Deterministic seed (demo/test only; omit for a secure generator)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decrypt a ciphertext file; fresh ciphertexts yield the original bytes,
    /// aggregates yield coefficient text (summed blocks carry no byte packing)
    Decrypt {
        /// Private key file
        #[arg(long = "priv")]
        private: PathBuf,
        /// Input ciphertext file
        #[arg(long = "in")]
        input: PathBuf,
        /// Output file
        #[arg(long)]
        out: PathBuf,
    },
    /// Add two or more ciphertext files block-wise
    Add {
        /// Ciphertext files to sum (all under identical parameters)
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        /// Output ciphertext file
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the guaranteed summand capacity for a parameter set
    Capacity {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Walk the multiplicative-homomorphism demo over textbook RSA
    RsaDemo {
        /// Modulus size for randomly generated keys
        #[arg(long, conflicts_with = "fixed_keys")]
        bits: Option<u32>,
        /// Use the built-in demo keys (modulus 391) and plaintexts 11, 13
        #[arg(long)]
        fixed_keys: bool,
        /// Deterministic seed for key/plaintext generation
        #[arg(long, conflicts_with = "fixed_keys")]
        seed: Option<u64>,
    },
    /// Simulate n parties summing encrypted vectors via an aggregator
    AggregateDemo {
        /// Number of parties
        #[arg(long)]
        parties: u32,
        /// Elements per party vector
        #[arg(long, default_value_t = 8)]
        len: usize,
        /// Simulation seed (keys, vectors and blinding all derive from it)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 128)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        df: u32,
        #[arg(long, default_value_t = 2)]
        dg: u32,
        #[arg(long, default_value_t = 2)]
        dr: u32,
        /// Run even past the guaranteed capacity
        #[arg(long)]
        force: bool,
    },
    /// Self-check every built-in reference vector; exits 0 only if all pass
    Vectors {
        /// Also write the reference keys and ciphertexts as blob files
        #[arg(long)]
        emit_dir: Option<PathBuf>,
    },
}

/// Failures split by exit code: usage errors exit 1, everything else 2.
enum CliError {
    Usage(String),
    Failure(String),
}

fn usage(err: Error) -> CliError {
    CliError::Usage(err.to_string())
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidRingParams(_) | Error::InvalidSamplingSpec(_) => {
                CliError::Usage(err.to_string())
            }
            other => CliError::Failure(other.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

/// Write a private-key file with owner-only permissions where supported.
fn write_private_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_file(path, bytes)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        fs::set_permissions(path, fs::Permissions::from_mode(0o600))
            .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn make_rng(seed: Option<u64>) -> Box<dyn RngCore> {
    match seed {
        Some(seed) => Box::new(ChaCha20Rng::seed_from_u64(seed)),
        None => Box::new(rand::rng()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Keygen {
            params,
            seed,
            out_prefix,
        } => cmd_keygen(&params, seed, &out_prefix),
        Command::Encrypt {
            public,
            input,
            out,
            seed,
        } => cmd_encrypt(&public, &input, &out, seed),
        Command::Decrypt {
            private,
            input,
            out,
        } => cmd_decrypt(&private, &input, &out),
        Command::Add { inputs, out } => cmd_add(&inputs, &out),
        Command::Capacity { params } => {
            let (ring, spec) = params.parse()?;
            println!("{}", ahe::capacity(&ring, &spec)?);
            Ok(())
        }
        Command::RsaDemo {
            bits,
            fixed_keys,
            seed,
        } => cmd_rsa_demo(bits, fixed_keys, seed),
        Command::AggregateDemo {
            parties,
            len,
            seed,
            n,
            p,
            q,
            df,
            dg,
            dr,
            force,
        } => {
            let ring = RingParams::new(n, p, q).map_err(usage)?;
            let spec = SamplingSpec::new(df, dg, dr);
            spec.validate(&ring).map_err(usage)?;
            let report = run_simulation(&SimConfig {
                parties,
                vector_length: len,
                params: ring,
                spec,
                seed,
                force,
            })?;
            print!("{}", report.to_text());
            Ok(())
        }
        Command::Vectors { emit_dir } => cmd_vectors(emit_dir.as_deref()),
    }
}

fn cmd_keygen(params: &ParamArgs, seed: Option<u64>, out_prefix: &Path) -> Result<(), CliError> {
    let (ring, spec) = params.parse()?;
    let cap = ahe::capacity(&ring, &spec)?;
    let mut rng = make_rng(seed);
    let (private, public) = keygen(&ring, &spec, rng.as_mut())?;

    let private_path = out_prefix.with_extension("priv");
    let public_path = out_prefix.with_extension("pub");
    write_private_file(&private_path, &serialize_private_key(&private))?;
    let public_bytes = serialize_public_key(&public);
    write_file(&public_path, &public_bytes)?;

    println!("capacity={cap}");
    println!("public_fingerprint={:016x}", fingerprint(&public_bytes));
    Ok(())
}

fn cmd_encrypt(
    public_path: &Path,
    input: &Path,
    out: &Path,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let public = deserialize_public_key(&read_file(public_path)?)?;
    let data = read_file(input)?;
    let blocks = pack_bytes(&data, public.params())?;
    let mut rng = make_rng(seed);
    let mut bytes = Vec::new();
    for block in &blocks {
        bytes.extend(serialize_ciphertext(&encrypt(
            &public,
            block,
            rng.as_mut(),
        )?));
    }
    write_file(out, &bytes)?;
    println!("blocks={}", blocks.len());
    Ok(())
}

fn cmd_decrypt(private_path: &Path, input: &Path, out: &Path) -> Result<(), CliError> {
    let private = deserialize_private_key(&read_file(private_path)?)?;
    let ciphertexts = deserialize_ciphertext_stream(&read_file(input)?)?;

    if ciphertexts.iter().all(|ct| ct.summands() == 1) {
        let blocks = ciphertexts
            .iter()
            .map(|ct| decrypt(&private, ct))
            .collect::<Result<Vec<Plaintext>, _>>()?;
        let data = unpack_bytes(&blocks, private.params())?;
        write_file(out, &data)?;
        println!("bytes={}", data.len());
    } else {
        // summed blocks no longer carry the byte packing: emit their
        // coefficient text instead
        let mut text = String::new();
        let mut exceeded = false;
        for ct in &ciphertexts {
            let result = ahe::decrypt_sum(&private, ct)?;
            exceeded |= result.capacity_exceeded;
            text.push_str(&poly_to_text(result.sum.poly()));
            text.push('\n');
        }
        write_file(out, text.as_bytes())?;
        println!("blocks={}", ciphertexts.len());
        if exceeded {
            eprintln!(
                "warning: summand count exceeds the guaranteed capacity; the sum may be wrong"
            );
        }
    }
    Ok(())
}

fn cmd_add(inputs: &[PathBuf], out: &Path) -> Result<(), CliError> {
    let mut streams = Vec::with_capacity(inputs.len());
    for path in inputs {
        streams.push(deserialize_ciphertext_stream(&read_file(path)?)?);
    }
    let sums = ntru_ahe::aggsim::aggregate_encrypted(&streams)?;
    let mut bytes = Vec::new();
    for ct in &sums {
        bytes.extend(serialize_ciphertext(ct));
    }
    write_file(out, &bytes)?;
    println!("blocks={}", sums.len());
    Ok(())
}

fn cmd_rsa_demo(bits: Option<u32>, fixed_keys: bool, seed: Option<u64>) -> Result<(), CliError> {
    let mut rng = make_rng(seed);
    let keys = if fixed_keys {
        RsaKeys::from_primes(17, 23).map_err(usage)?
    } else {
        RsaKeys::generate(bits.unwrap_or(32), rng.as_mut()).map_err(usage)?
    };
    let (a1, a2) = if fixed_keys {
        (11, 13)
    } else {
        // keep the clear product below the modulus so the demo stays exact
        let limit = (keys.modulus() as f64).sqrt() as u64;
        (
            rand::Rng::random_range(&mut rng, 2..limit),
            rand::Rng::random_range(&mut rng, 2..limit),
        )
    };

    let c1 = rsa_mhe::encrypt(&keys, a1)?;
    let c2 = rsa_mhe::encrypt(&keys, a2)?;
    let product = rsa_mhe::ct_mul(&keys, &[c1, c2])?;
    let decrypted = rsa_mhe::decrypt(&keys, product)?;
    let clear = a1 * a2 % keys.modulus();

    println!("modulus={}", keys.modulus());
    println!("public_exponent={}", keys.public_exponent());
    println!("private_exponent={}", keys.private_exponent());
    println!("plaintext_1={a1}");
    println!("plaintext_2={a2}");
    println!("ciphertext_1={c1}");
    println!("ciphertext_2={c2}");
    println!("ciphertext_product={product}");
    println!("decrypted_product={decrypted}");
    println!("clear_product={clear}");
    println!("match={}", decrypted == clear);
    if decrypted != clear {
        return Err(CliError::Failure(
            "decrypted product does not match the clear product".into(),
        ));
    }
    Ok(())
}

fn cmd_vectors(emit_dir: Option<&Path>) -> Result<(), CliError> {
    let checks = vectors::run_all()?;
    let mut all_passed = true;
    for check in &checks {
        if check.passed {
            println!("vector {}: PASS", check.name);
        } else {
            all_passed = false;
            println!("vector {}: FAIL ({})", check.name, check.detail);
        }
    }

    if let Some(dir) = emit_dir {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Failure(format!("{}: {e}", dir.display())))?;
        let (private, public) = vectors::demo_keys();
        write_private_file(&dir.join("demo.priv"), &serialize_private_key(&private))?;
        write_file(&dir.join("demo.pub"), &serialize_public_key(&public))?;
        write_file(
            &dir.join("c1.ct"),
            &serialize_ciphertext(&vectors::reference_ciphertext_1()),
        )?;
        write_file(
            &dir.join("c2.ct"),
            &serialize_ciphertext(&vectors::reference_ciphertext_2()),
        )?;
        println!("fixtures={}", dir.display());
    }

    if all_passed {
        Ok(())
    } else {
        Err(CliError::Failure("reference vector mismatch".into()))
    }
}
