//! Public parameter generation, validation and the parameter file format.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::{biguint_from_hex, biguint_to_hex};
use crate::error::{Error, Result};
use crate::field::{is_irreducible, FieldParams};
use crate::hash_oracle::OracleConfig;
use crate::primality::{is_probable_prime, sample_prime_congruent, MR_ROUNDS};

pub use crate::primality::sample_prime_3mod4;

pub const MIN_LAMBDA: u32 = 8;

/// Upper bound on the delay as a polynomial in the security parameter:
/// `T <= lambda^max_exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DelayPolicy {
    pub max_exponent: u32,
}

impl Default for DelayPolicy {
    fn default() -> Self {
        Self { max_exponent: 3 }
    }
}

impl DelayPolicy {
    pub fn max_delay(&self, lambda: u32) -> u128 {
        (lambda as u128).saturating_pow(self.max_exponent)
    }

    fn check(&self, lambda: u32, delay: u64) -> Result<()> {
        if lambda < MIN_LAMBDA {
            return Err(Error::Policy(format!("lambda must be at least {MIN_LAMBDA}, got {lambda}")));
        }
        if delay == 0 {
            return Err(Error::Policy("delay must be positive".into()));
        }
        if delay as u128 > self.max_delay(lambda) {
            return Err(Error::Policy(format!(
                "delay {delay} exceeds lambda^{} = {}",
                self.max_exponent,
                self.max_delay(lambda)
            )));
        }
        Ok(())
    }
}

/// `pp = <F_q, H>` together with the security and delay parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicParams {
    pub lambda: u32,
    /// Delay `T`: evaluation performs at least this many sequential squarings.
    pub delay: u64,
    pub field: FieldParams,
    pub oracle: OracleConfig,
}

/// Bit length of `q` required for security `lambda` and delay `delay`.
///
/// Evaluation performs `bitlen((q+1)/4) - 1` squarings, which is
/// `bitlen(q) - 3` unless `q + 1` is a power of two, so `bitlen(q) = T + 3`
/// gives exactly `T`.
pub fn required_bits(lambda: u32, delay: u64) -> u64 {
    (lambda as u64).max(delay + 3)
}

/// Prime-field setup with the default delay policy.
pub fn setup<R: Rng + ?Sized>(lambda: u32, delay: u64, rng: &mut R) -> Result<PublicParams> {
    setup_with(lambda, delay, 1, &DelayPolicy::default(), rng)
}

/// Setup over `F_{p^n}` for odd `ext_degree = n`. For `n = 1`, `bitlen(q)`
/// equals [`required_bits`]; for larger `n` it is at least that.
pub fn setup_with<R: Rng + ?Sized>(
    lambda: u32,
    delay: u64,
    ext_degree: usize,
    policy: &DelayPolicy,
    rng: &mut R,
) -> Result<PublicParams> {
    policy.check(lambda, delay)?;
    if ext_degree == 0 || ext_degree % 2 == 0 {
        return Err(Error::Policy(format!("extension degree must be odd, got {ext_degree}")));
    }
    let target = required_bits(lambda, delay);
    let n = ext_degree as u64;
    let field = if n == 1 {
        FieldParams::prime(sample_prime_3mod4(target, rng))?
    } else {
        // p^n >= 2^(n (pbits - 1)) >= 2^(target - 1)
        let pbits = ((target - 1).div_ceil(n) + 1).max(3);
        // With n | p - 1 a random binomial x^n - a is irreducible often and cheap to test.
        let congruence = if pbits >= 32 && pbits > 2 + 64 - n.leading_zeros() as u64 { n } else { 1 };
        let p = sample_prime_congruent(pbits, congruence, rng);
        let f = find_irreducible(&p, ext_degree, rng);
        FieldParams::extension(p, f)?
    };
    Ok(PublicParams { lambda, delay, field, oracle: OracleConfig::default() })
}

/// Samples a monic irreducible polynomial of degree `n` over `F_p`, degree 0
/// first. Returns `x` for `n = 1`. When `n | p - 1` only binomials `x^n - a`
/// are sampled.
pub fn find_irreducible<R: Rng + ?Sized>(p: &BigUint, n: usize, rng: &mut R) -> Vec<BigUint> {
    assert!(n >= 1, "degree must be positive");
    if n == 1 {
        return vec![BigUint::zero(), BigUint::one()];
    }
    let binomial = ((p - 1u8) % n).is_zero();
    loop {
        let mut f = vec![BigUint::zero(); n + 1];
        f[n] = BigUint::one();
        if binomial {
            f[0] = rng.gen_biguint_range(&BigUint::one(), p);
        } else {
            for c in &mut f[..n] {
                *c = rng.gen_biguint_below(p);
            }
        }
        if is_irreducible(p, &f) {
            return f;
        }
    }
}

/// Outcome of [`validate`]: empty `issues` means every invariant holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub issues: Vec<String>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn validate(pp: &PublicParams) -> Validation {
    validate_with(pp, &DelayPolicy::default())
}

pub fn validate_with(pp: &PublicParams, policy: &DelayPolicy) -> Validation {
    let mut issues = Vec::new();
    if let Err(e) = policy.check(pp.lambda, pp.delay) {
        issues.push(e.to_string());
    }
    let field = &pp.field;
    let p = field.characteristic();
    let n = field.degree();
    if !is_probable_prime(p, MR_ROUNDS) {
        issues.push("p is not prime".into());
    }
    if (p % 4u8).to_u8() != Some(3) {
        issues.push("p is not 3 mod 4".into());
    }
    if n % 2 == 0 {
        issues.push(format!("extension degree {n} is even"));
    }
    if !field.is_3_mod_4() {
        issues.push("q is not 3 mod 4".into());
    }
    if !is_irreducible(p, field.modulus_poly()) {
        issues.push("modulus polynomial is reducible".into());
    }
    let need = required_bits(pp.lambda, pp.delay);
    if field.order().bits() < need {
        issues.push(format!("q has {} bits, need at least {need}", field.order().bits()));
    }
    if !pp.oracle.is_well_formed() {
        issues.push("oracle config is malformed".into());
    }
    Validation { issues }
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    lambda: u32,
    #[serde(rename = "T")]
    delay: u64,
    p: String,
    n: usize,
    f: Vec<String>,
    oracle: OracleConfig,
}

impl PublicParams {
    /// Canonical JSON parameter file (lowercase hex, no leading zeros).
    pub fn to_json(&self) -> String {
        let file = ParamsFile {
            lambda: self.lambda,
            delay: self.delay,
            p: biguint_to_hex(self.field.characteristic()),
            n: self.field.degree(),
            f: self.field.modulus_poly().iter().map(biguint_to_hex).collect(),
            oracle: self.oracle.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Parses a parameter file. Only the structure is checked; run
    /// [`validate`] before trusting the contents.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: ParamsFile = serde_json::from_str(s)?;
        if file.f.len() != file.n + 1 {
            return Err(Error::Format(format!(
                "degree n = {} needs {} modulus coefficients, found {}",
                file.n,
                file.n + 1,
                file.f.len()
            )));
        }
        let p = biguint_from_hex(&file.p)?;
        let f = file.f.iter().map(|c| biguint_from_hex(c)).collect::<Result<Vec<_>>>()?;
        let field = FieldParams::extension(p, f).map_err(|e| Error::Format(e.to_string()))?;
        Ok(Self { lambda: file.lambda, delay: file.delay, field, oracle: file.oracle })
    }
}
