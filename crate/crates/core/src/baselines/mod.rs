//! Pietrzak and Wesolowski repeated-squaring VDFs over an RSA group, used as
//! reference points for verification cost.

pub mod pietrzak;
pub mod wesolowski;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::{biguint_from_hex, biguint_to_hex, to_fixed_be};
use crate::error::{Error, Result};
use crate::field::OpCounter;
use crate::primality::sample_prime_3mod4;

pub use pietrzak::PietrzakProof;
pub use wesolowski::WesolowskiProof;

/// `Z*_N` for a composite `N` whose factorization is not retained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsaGroup {
    modulus: BigUint,
}

/// Generates `N = p * q` from two distinct `bits/2`-bit primes; the factors
/// are dropped before returning.
pub fn rsa_setup<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Result<RsaGroup> {
    if bits < 128 {
        return Err(Error::Policy(format!("RSA modulus must have at least 128 bits, got {bits}")));
    }
    let p = sample_prime_3mod4(bits / 2, rng);
    let q = loop {
        let q = sample_prime_3mod4(bits - bits / 2, rng);
        if q != p {
            break q;
        }
    };
    RsaGroup::from_modulus(p * q)
}

impl RsaGroup {
    /// Wraps an odd modulus. No check that it is a product of two primes.
    pub fn from_modulus(modulus: BigUint) -> Result<Self> {
        if modulus.is_even() || modulus < BigUint::from(9u8) {
            return Err(Error::Parameter("RSA modulus must be odd and at least 9".into()));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn bits(&self) -> u64 {
        self.modulus.bits()
    }

    pub fn element_bytes(&self) -> usize {
        self.bits().div_ceil(8) as usize
    }

    pub fn encode(&self, a: &BigUint) -> Vec<u8> {
        to_fixed_be(a, self.element_bytes())
    }

    pub fn contains(&self, a: &BigUint) -> bool {
        a < &self.modulus
    }

    pub(crate) fn check_base(&self, g: &BigUint) -> Result<()> {
        if g < &BigUint::from(2u8) || g >= &self.modulus {
            return Err(Error::Parameter("base must lie in [2, N - 1]".into()));
        }
        Ok(())
    }

    pub(crate) fn check_element(&self, a: &BigUint, what: &str) -> Result<()> {
        if !self.contains(a) {
            return Err(Error::Format(format!("{what} is not reduced modulo N")));
        }
        Ok(())
    }

    pub fn square(&self, a: &BigUint, ctr: &mut OpCounter) -> BigUint {
        ctr.squarings += 1;
        (a * a) % &self.modulus
    }

    pub fn mul(&self, a: &BigUint, b: &BigUint, ctr: &mut OpCounter) -> BigUint {
        ctr.multiplications += 1;
        (a * b) % &self.modulus
    }

    /// `a^(2^t)` by `t` sequential squarings.
    pub fn repeated_square(&self, a: &BigUint, t: u64, ctr: &mut OpCounter) -> BigUint {
        (0..t).fold(a.clone(), |acc, _| self.square(&acc, ctr))
    }

    /// Left-to-right square-and-multiply, `max(bitlen(e) - 1, 0)` squarings.
    pub fn pow(&self, a: &BigUint, e: &BigUint, ctr: &mut OpCounter) -> BigUint {
        let bits = e.bits();
        if bits == 0 {
            return BigUint::one();
        }
        let mut acc = a.clone();
        for i in (0..bits - 1).rev() {
            acc = self.square(&acc, ctr);
            if e.bit(i) {
                acc = self.mul(&acc, a, ctr);
            }
        }
        acc
    }
}

/// JSON form of a baseline proof together with the statement it proves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase", deny_unknown_fields)]
pub enum BaselineProofFile {
    Pietrzak {
        version: u32,
        modulus: String,
        g: String,
        #[serde(rename = "T")]
        delay: u64,
        lambda: u32,
        y: String,
        z: Vec<String>,
    },
    Wesolowski {
        version: u32,
        modulus: String,
        g: String,
        #[serde(rename = "T")]
        delay: u64,
        lambda: u32,
        y: String,
        pi: String,
        /// How the challenge prime was derived.
        ell_derivation: String,
    },
}

pub const PROOF_FILE_VERSION: u32 = 1;

/// A baseline statement and proof decoded from [`BaselineProofFile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodedBaseline {
    Pietrzak { group: RsaGroup, g: BigUint, delay: u64, lambda: u32, proof: PietrzakProof },
    Wesolowski { group: RsaGroup, g: BigUint, delay: u64, lambda: u32, proof: WesolowskiProof },
}

impl DecodedBaseline {
    pub fn verify(&self, ctr: &mut OpCounter) -> Result<bool> {
        match self {
            Self::Pietrzak { group, g, delay, lambda, proof } => {
                pietrzak::verify(group, g, *delay, *lambda, proof, ctr)
            }
            Self::Wesolowski { group, g, delay, lambda, proof } => {
                wesolowski::verify(group, g, *delay, *lambda, proof, ctr)
            }
        }
    }
}

impl BaselineProofFile {
    pub fn pietrzak(group: &RsaGroup, g: &BigUint, delay: u64, lambda: u32, proof: &PietrzakProof) -> Self {
        Self::Pietrzak {
            version: PROOF_FILE_VERSION,
            modulus: biguint_to_hex(group.modulus()),
            g: biguint_to_hex(g),
            delay,
            lambda,
            y: biguint_to_hex(&proof.y),
            z: proof.z.iter().map(biguint_to_hex).collect(),
        }
    }

    pub fn wesolowski(group: &RsaGroup, g: &BigUint, delay: u64, lambda: u32, proof: &WesolowskiProof) -> Self {
        Self::Wesolowski {
            version: PROOF_FILE_VERSION,
            modulus: biguint_to_hex(group.modulus()),
            g: biguint_to_hex(g),
            delay,
            lambda,
            y: biguint_to_hex(&proof.y),
            pi: biguint_to_hex(&proof.pi),
            ell_derivation: wesolowski::ELL_DERIVATION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn decode(&self) -> Result<DecodedBaseline> {
        let version = match self {
            Self::Pietrzak { version, .. } | Self::Wesolowski { version, .. } => *version,
        };
        if version != PROOF_FILE_VERSION {
            return Err(Error::Format(format!("unsupported proof file version {version}")));
        }
        Ok(match self {
            Self::Pietrzak { modulus, g, delay, lambda, y, z, .. } => DecodedBaseline::Pietrzak {
                group: RsaGroup::from_modulus(biguint_from_hex(modulus)?)
                    .map_err(|e| Error::Format(e.to_string()))?,
                g: biguint_from_hex(g)?,
                delay: *delay,
                lambda: *lambda,
                proof: PietrzakProof {
                    y: biguint_from_hex(y)?,
                    z: z.iter().map(|v| biguint_from_hex(v)).collect::<Result<_>>()?,
                },
            },
            Self::Wesolowski { modulus, g, delay, lambda, y, pi, .. } => DecodedBaseline::Wesolowski {
                group: RsaGroup::from_modulus(biguint_from_hex(modulus)?)
                    .map_err(|e| Error::Format(e.to_string()))?,
                g: biguint_from_hex(g)?,
                delay: *delay,
                lambda: *lambda,
                proof: WesolowskiProof { y: biguint_from_hex(y)?, pi: biguint_from_hex(pi)? },
            },
        })
    }
}
