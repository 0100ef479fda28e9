//! Wesolowski's VDF: `y = g^(2^T)`, `pi = g^floor(2^T / l)` for a hashed
//! prime `l`; the verifier checks `y = pi^l * g^r` with `r = 2^T mod l`.

use num_bigint::BigUint;
use num_traits::One;

use super::RsaGroup;
use crate::error::Result;
use crate::field::OpCounter;
use crate::hash_oracle::hash_to_prime;

pub const ELL_DERIVATION: &str = "sha256-counter, first 2*lambda-bit probable prime";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WesolowskiProof {
    /// `g^(2^T)`
    pub y: BigUint,
    pub pi: BigUint,
}

impl WesolowskiProof {
    pub fn proof_bytes(&self, group: &RsaGroup) -> usize {
        group.element_bytes()
    }
}

/// The challenge prime `l = H_prime(bin(g) || bin(y))`.
pub fn challenge_prime(group: &RsaGroup, g: &BigUint, y: &BigUint, lambda: u32) -> Result<BigUint> {
    hash_to_prime(&group.encode(g), &group.encode(y), lambda)
}

pub fn prove(group: &RsaGroup, g: &BigUint, delay: u64, lambda: u32, ctr: &mut OpCounter) -> Result<WesolowskiProof> {
    group.check_base(g)?;
    let y = group.repeated_square(g, delay, ctr);
    let ell = challenge_prime(group, g, &y, lambda)?;
    let quotient = (BigUint::one() << delay) / &ell;
    let pi = group.pow(g, &quotient, ctr);
    Ok(WesolowskiProof { y, pi })
}

/// Group squarings are charged to `ctr`; the integer computation of
/// `2^T mod l` is not a group operation and is not counted.
pub fn verify(
    group: &RsaGroup,
    g: &BigUint,
    delay: u64,
    lambda: u32,
    proof: &WesolowskiProof,
    ctr: &mut OpCounter,
) -> Result<bool> {
    group.check_base(g)?;
    group.check_element(&proof.y, "y")?;
    group.check_element(&proof.pi, "pi")?;
    let ell = challenge_prime(group, g, &proof.y, lambda)?;
    let r = BigUint::from(2u8).modpow(&BigUint::from(delay), &ell);
    let lhs = group.pow(&proof.pi, &ell, ctr);
    let rhs = group.pow(g, &r, ctr);
    Ok(group.mul(&lhs, &rhs, ctr) == proof.y)
}
