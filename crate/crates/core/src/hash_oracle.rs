//! Random oracles: `H'` into `F*_q \ {1, -1}`, `H = H'^2` into the nontrivial
//! quadratic residues, and a hash-to-prime oracle for the Wesolowski baseline.
//!
//! All derivations expand SHA-256 in counter mode. For a target of `w` bytes
//! the stream is `SHA-256(prefix || 0u32) || SHA-256(prefix || 1u32) || ...`
//! truncated to `w` bytes, and the excess high-order bits of the first byte
//! are cleared to reach the requested bit length.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldParams, OpCounter};
use crate::primality::{is_probable_prime, MR_ROUNDS};

pub const DEFAULT_DST: &str = "SSVDF-v1-H";
pub const PRIME_DST: &[u8] = b"SSVDF-v1-Hprime";
pub const DEFAULT_MAX_ATTEMPTS: u32 = 1000;

/// Configuration of the `H`/`H'` oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub dst: String,
    #[serde(default = "default_max_attempts", skip_serializing_if = "is_default_max_attempts")]
    pub max_attempts: u32,
}

fn default_max_attempts() -> u32 {
    DEFAULT_MAX_ATTEMPTS
}

fn is_default_max_attempts(v: &u32) -> bool {
    *v == DEFAULT_MAX_ATTEMPTS
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { dst: DEFAULT_DST.to_string(), max_attempts: DEFAULT_MAX_ATTEMPTS }
    }
}

impl OracleConfig {
    pub fn is_well_formed(&self) -> bool {
        !self.dst.is_empty() && self.max_attempts >= 1
    }
}

/// Counter-mode SHA-256 expansion of `prefix` to exactly `bits` bits.
fn expand(prefix: &[u8], bits: u64) -> BigUint {
    let width = bits.div_ceil(8) as usize;
    let mut out = Vec::with_capacity(width + 32);
    let mut block = 0u32;
    while out.len() < width {
        out.extend_from_slice(&Sha256::new().chain_update(prefix).chain_update(block.to_be_bytes()).finalize());
        block += 1;
    }
    out.truncate(width);
    let excess = width as u64 * 8 - bits;
    out[0] &= 0xffu8 >> excess;
    BigUint::from_bytes_be(&out)
}

/// `H'(x)`: a deterministic element of `F*_q \ {1, -1}`.
///
/// Coefficient `i` of attempt `ctr` is the first candidate below `p` among
/// `expand(dst || len(x) as u64 BE || x || ctr as u32 BE || i as u32 BE || j as u32 BE)`
/// for `j = 0, 1, ...`; candidates `>= p` are discarded, never reduced. An
/// assembled element in `{0, 1, -1}` moves on to the next `ctr`.
pub fn hash_to_field_star(x: &[u8], field: &FieldParams, cfg: &OracleConfig) -> Result<FieldElement> {
    let p = field.characteristic();
    let bits = p.bits();
    let minus_one = field.neg(&field.one())?;
    let mut prefix = Vec::with_capacity(cfg.dst.len() + x.len() + 20);
    prefix.extend_from_slice(cfg.dst.as_bytes());
    prefix.extend_from_slice(&(x.len() as u64).to_be_bytes());
    prefix.extend_from_slice(x);
    let base_len = prefix.len();

    for ctr in 0..cfg.max_attempts {
        let mut coeffs = Vec::with_capacity(field.degree());
        for i in 0..field.degree() as u32 {
            let coeff = (0..cfg.max_attempts).find_map(|j| {
                prefix.truncate(base_len);
                prefix.extend_from_slice(&ctr.to_be_bytes());
                prefix.extend_from_slice(&i.to_be_bytes());
                prefix.extend_from_slice(&j.to_be_bytes());
                Some(expand(&prefix, bits)).filter(|c| c < p)
            });
            coeffs.push(coeff.ok_or_else(|| {
                Error::Oracle(format!("coefficient sampling exceeded {} attempts", cfg.max_attempts))
            })?);
        }
        let e = field.element(coeffs)?;
        if e.is_zero() || e.is_one() || e == minus_one {
            continue;
        }
        return Ok(e);
    }
    Err(Error::Oracle(format!("no element outside {{0, 1, -1}} after {} attempts", cfg.max_attempts)))
}

/// `H(x) = H'(x)^2`, an element of `QR_q \ {1}`. The squaring is not charged
/// to any caller's counter.
pub fn hash_to_qr(x: &[u8], field: &FieldParams, cfg: &OracleConfig) -> Result<FieldElement> {
    let h = hash_to_field_star(x, field, cfg)?;
    field.square(&h, &mut OpCounter::new())
}

/// Deterministic `2*lambda`-bit probable prime derived from two encodings:
/// candidate `ctr` is `expand(dst' || g_bytes || y_bytes || ctr as u32 BE)`
/// truncated to `2*lambda` bits with the top and bottom bits set; the first
/// candidate passing Miller-Rabin is returned.
///
/// This increments over `2*lambda`-bit integers rather than sampling
/// uniformly from the first `2^(2*lambda)` primes.
pub fn hash_to_prime(g_bytes: &[u8], y_bytes: &[u8], lambda: u32) -> Result<BigUint> {
    if lambda < 8 {
        return Err(Error::Parameter("hash_to_prime needs lambda >= 8".into()));
    }
    let bits = 2 * lambda as u64;
    let top = BigUint::one() << (bits - 1);
    let mut prefix = [PRIME_DST, g_bytes, y_bytes].concat();
    let base_len = prefix.len();
    for ctr in 0u32.. {
        prefix.truncate(base_len);
        prefix.extend_from_slice(&ctr.to_be_bytes());
        let candidate = expand(&prefix, bits) | &top | BigUint::one();
        if is_probable_prime(&candidate, MR_ROUNDS) {
            return Ok(candidate);
        }
    }
    unreachable!("prime gaps are far below 2^32")
}
