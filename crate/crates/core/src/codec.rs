//! Canonical encodings: `a0||a1||...` coefficient text, byte-message packing
//! into plaintext blocks, and the binary blob format for keys and
//! ciphertexts.
//!
//! Every encoding here is deterministic (equal values produce identical
//! bytes) and round-trips exactly. The blob layout is documented byte-exact
//! in `docs/formats.md`.

use crate::error::{Error, Result};
use crate::ntru::{Ciphertext, Plaintext, PrivateKey, PublicKey, SamplingSpec};
use crate::ring::{Poly, RingParams};

/// Leading bytes of every blob.
pub const MAGIC: [u8; 8] = *b"NTRUAHE\0";
/// Current blob format version.
pub const FORMAT_VERSION: u8 = 1;

const ROLE_PRIVATE: u8 = 0x01;
const ROLE_PUBLIC: u8 = 0x02;
const ROLE_CIPHERTEXT: u8 = 0x03;

// --- coefficient text ---

/// Render a polynomial as `||`-joined signed decimal coefficients in index
/// order.
pub fn poly_to_text(poly: &Poly) -> String {
    poly.coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("||")
}

/// Parse `||`-joined signed decimals into a polynomial of exactly `n`
/// coefficients.
pub fn text_to_poly(text: &str, n: usize) -> Result<Poly> {
    if n < 2 {
        return Err(Error::ParseError(format!(
            "a coefficient vector needs N >= 2, got N = {n}"
        )));
    }
    let fields: Vec<&str> = text.split("||").collect();
    if fields.len() != n {
        return Err(Error::ParseError(format!(
            "expected {n} coefficients, found {}",
            fields.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(n);
    for field in fields {
        let value = field
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::ParseError(format!("not a signed integer: {field:?}")))?;
        coeffs.push(value);
    }
    Ok(Poly::new(coeffs))
}

// --- byte-message packing ---

/// Digits of base p used to hold one byte: the smallest k with p^k >= 256
/// (6 for p = 3, 8 for p = 2, 1 once p >= 256).
fn digits_per_byte(p: u64) -> usize {
    let mut k = 1;
    let mut reach = p;
    while reach < 256 {
        reach *= p;
        k += 1;
    }
    k
}

fn center_digit(d: u64, p: u64) -> i64 {
    let half = (p / 2) as i64;
    let v = d as i64;
    if v > half {
        v - p as i64
    } else {
        v
    }
}

/// Pack a byte string into plaintext blocks: an LEB128 length prefix followed
/// by the data, each byte spelled as base-p digits (most significant first)
/// in centered form, the digit stream chunked into N-coefficient blocks and
/// zero-padded.
pub fn pack_bytes(data: &[u8], params: &RingParams) -> Result<Vec<Plaintext>> {
    if data.len() > u32::MAX as usize {
        return Err(Error::MessageTooLong(data.len()));
    }
    let mut stream = Vec::with_capacity(data.len() + 5);
    let mut len = data.len() as u32;
    loop {
        let byte = (len & 0x7f) as u8;
        len >>= 7;
        if len == 0 {
            stream.push(byte);
            break;
        }
        stream.push(byte | 0x80);
    }
    stream.extend_from_slice(data);

    let p = params.p();
    let k = digits_per_byte(p);
    let mut digits = Vec::with_capacity(stream.len() * k);
    for &byte in &stream {
        let mut value = byte as u64;
        let mut byte_digits = [0i64; 8];
        for slot in byte_digits[..k].iter_mut().rev() {
            *slot = center_digit(value % p, p);
            value /= p;
        }
        digits.extend_from_slice(&byte_digits[..k]);
    }

    let n = params.n();
    let blocks = digits
        .chunks(n)
        .map(|chunk| {
            let mut coeffs = chunk.to_vec();
            coeffs.resize(n, 0);
            Plaintext::new(Poly::new(coeffs), params).expect("digits are centered mod p")
        })
        .collect();
    Ok(blocks)
}

/// Invert [`pack_bytes`]: recover the digit stream, reassemble bytes, read
/// the length prefix and return exactly that many payload bytes.
pub fn unpack_bytes(blocks: &[Plaintext], params: &RingParams) -> Result<Vec<u8>> {
    let p = params.p();
    let k = digits_per_byte(p);
    let mut digits = Vec::new();
    for block in blocks {
        if block.params() != params {
            return Err(Error::ParseError(
                "plaintext block parameters do not match".into(),
            ));
        }
        digits.extend(
            block
                .poly()
                .coeffs()
                .iter()
                .map(|c| c.rem_euclid(p as i64) as u64),
        );
    }

    let mut bytes = Vec::with_capacity(digits.len() / k);
    for group in digits.chunks_exact(k) {
        let mut value: u64 = 0;
        for &d in group {
            value = value * p + d;
        }
        if value > 255 {
            return Err(Error::ParseError(format!(
                "digit group decodes to {value}, not a byte"
            )));
        }
        bytes.push(value as u8);
    }

    let mut length: u64 = 0;
    let mut shift = 0;
    let mut header = 0usize;
    loop {
        let Some(&byte) = bytes.get(header) else {
            return Err(Error::ParseError("unterminated length prefix".into()));
        };
        header += 1;
        length |= ((byte & 0x7f) as u64) << shift;
        if byte & 0x80 == 0 {
            break;
        }
        shift += 7;
        if shift > 28 {
            return Err(Error::ParseError("length prefix too wide".into()));
        }
    }
    let length = length as usize;
    if header + length > bytes.len() {
        return Err(Error::ParseError(format!(
            "length prefix claims {length} bytes, only {} present",
            bytes.len() - header
        )));
    }
    Ok(bytes[header..header + length].to_vec())
}

// --- binary blobs ---

/// FNV-1a over a serialized blob; used as a short content fingerprint.
pub fn fingerprint(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &byte in bytes {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn write_header(out: &mut Vec<u8>, role: u8, params: &RingParams) {
    out.extend_from_slice(&MAGIC);
    out.push(FORMAT_VERSION);
    out.push(role);
    out.extend_from_slice(&(params.n() as u32).to_le_bytes());
    out.extend_from_slice(&params.p().to_le_bytes());
    out.extend_from_slice(&params.q().to_le_bytes());
}

fn write_spec(out: &mut Vec<u8>, spec: &SamplingSpec) {
    out.extend_from_slice(&spec.d_f.to_le_bytes());
    out.extend_from_slice(&spec.d_g.to_le_bytes());
    out.extend_from_slice(&spec.d_r.to_le_bytes());
}

fn write_poly(out: &mut Vec<u8>, poly: &Poly) {
    for &c in poly.coeffs() {
        out.extend_from_slice(&c.to_le_bytes());
    }
}

pub fn serialize_private_key(key: &PrivateKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ROLE_PRIVATE, key.params());
    write_spec(&mut out, key.spec());
    write_poly(&mut out, key.f());
    write_poly(&mut out, key.f_p());
    write_poly(&mut out, key.f_q());
    out
}

pub fn serialize_public_key(key: &PublicKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ROLE_PUBLIC, key.params());
    write_spec(&mut out, key.spec());
    write_poly(&mut out, key.h());
    out
}

pub fn serialize_ciphertext(ciphertext: &Ciphertext) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ROLE_CIPHERTEXT, ciphertext.params());
    out.extend_from_slice(&ciphertext.summands().to_le_bytes());
    write_poly(&mut out, ciphertext.poly());
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(Error::DeserializeError {
            offset: self.pos,
            reason: reason.into(),
        })
    }

    fn take(&mut self, count: usize) -> Result<&'a [u8]> {
        match self.buf.get(self.pos..self.pos + count) {
            Some(bytes) => {
                self.pos += count;
                Ok(bytes)
            }
            None => self.fail(format!(
                "unexpected end of input: wanted {count} bytes, {} left",
                self.buf.len() - self.pos
            )),
        }
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32_le(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64_le(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn poly(&mut self, n: usize) -> Result<Poly> {
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            coeffs.push(i64::from_le_bytes(self.take(8)?.try_into().unwrap()));
        }
        Ok(Poly::new(coeffs))
    }

    /// Parse magic, version, expected role, and the ring parameters.
    fn header(&mut self, expected_role: u8) -> Result<RingParams> {
        let magic_offset = self.pos;
        let magic = self.take(8)?;
        if magic != MAGIC {
            return Err(Error::DeserializeError {
                offset: magic_offset,
                reason: "bad magic".into(),
            });
        }
        let version_offset = self.pos;
        let version = self.u8()?;
        if version != FORMAT_VERSION {
            return Err(Error::DeserializeError {
                offset: version_offset,
                reason: format!("unknown format version {version}"),
            });
        }
        let role_offset = self.pos;
        let role = self.u8()?;
        if role != expected_role {
            return Err(Error::DeserializeError {
                offset: role_offset,
                reason: format!("expected role {expected_role:#04x}, found {role:#04x}"),
            });
        }
        let params_offset = self.pos;
        let n = self.u32_le()? as usize;
        let p = self.u64_le()?;
        let q = self.u64_le()?;
        RingParams::new(n, p, q).map_err(|e| Error::DeserializeError {
            offset: params_offset,
            reason: e.to_string(),
        })
    }

    fn spec(&mut self) -> Result<SamplingSpec> {
        let d_f = self.u32_le()?;
        let d_g = self.u32_le()?;
        let d_r = self.u32_le()?;
        Ok(SamplingSpec::new(d_f, d_g, d_r))
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::DeserializeError {
                offset: self.pos,
                reason: format!("{} bytes of trailing data", self.buf.len() - self.pos),
            });
        }
        Ok(())
    }
}

pub fn deserialize_private_key(bytes: &[u8]) -> Result<PrivateKey> {
    let mut reader = Reader::new(bytes);
    let params = reader.header(ROLE_PRIVATE)?;
    let spec = reader.spec()?;
    let body_offset = reader.pos;
    let f = reader.poly(params.n())?;
    let f_p = reader.poly(params.n())?;
    let f_q = reader.poly(params.n())?;
    reader.finish()?;
    PrivateKey::from_parts(f, f_p, f_q, params, spec).map_err(|e| Error::DeserializeError {
        offset: body_offset,
        reason: e.to_string(),
    })
}

pub fn deserialize_public_key(bytes: &[u8]) -> Result<PublicKey> {
    let mut reader = Reader::new(bytes);
    let params = reader.header(ROLE_PUBLIC)?;
    let spec = reader.spec()?;
    let body_offset = reader.pos;
    let h = reader.poly(params.n())?;
    reader.finish()?;
    PublicKey::from_parts(h, params, spec).map_err(|e| Error::DeserializeError {
        offset: body_offset,
        reason: e.to_string(),
    })
}

pub fn deserialize_ciphertext(bytes: &[u8]) -> Result<Ciphertext> {
    let mut reader = Reader::new(bytes);
    let ciphertext = read_ciphertext(&mut reader)?;
    reader.finish()?;
    Ok(ciphertext)
}

/// Parse a file of back-to-back ciphertext blobs (at least one).
pub fn deserialize_ciphertext_stream(bytes: &[u8]) -> Result<Vec<Ciphertext>> {
    let mut reader = Reader::new(bytes);
    let mut ciphertexts = vec![read_ciphertext(&mut reader)?];
    while reader.pos < bytes.len() {
        ciphertexts.push(read_ciphertext(&mut reader)?);
    }
    Ok(ciphertexts)
}

fn read_ciphertext(reader: &mut Reader<'_>) -> Result<Ciphertext> {
    let params = reader.header(ROLE_CIPHERTEXT)?;
    let summands_offset = reader.pos;
    let summands = reader.u32_le()?;
    let body_offset = reader.pos;
    let poly = reader.poly(params.n())?;
    Ciphertext::from_parts(poly, summands, params).map_err(|e| Error::DeserializeError {
        offset: if summands == 0 {
            summands_offset
        } else {
            body_offset
        },
        reason: e.to_string(),
    })
}
