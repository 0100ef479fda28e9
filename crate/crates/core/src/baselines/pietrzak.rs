//! Pietrzak's halving protocol, made non-interactive with a hash challenge.
//!
//! With `u_1 = g`, `v_1 = y`, round `i` publishes `z_i = u_i^(2^(T/2^i))`,
//! derives `r_i = H(u_i, T/2^(i-1), v_i, z_i) mod 2^lambda`, and sets
//! `u_{i+1} = u_i^r_i * z_i`, `v_{i+1} = z_i^r_i * v_i`. After `log2 T`
//! rounds the verifier checks `v = u^2`.
//!
//! The prover recomputes each `z_i` from scratch instead of storing
//! checkpoints, so it spends about `2T` squarings in total.

use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use super::RsaGroup;
use crate::error::{Error, Result};
use crate::field::OpCounter;

const CHALLENGE_DST: &[u8] = b"SSVDF-v1-Pietrzak";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PietrzakProof {
    /// `g^(2^T)`
    pub y: BigUint,
    pub z: Vec<BigUint>,
}

impl PietrzakProof {
    pub fn proof_bytes(&self, group: &RsaGroup) -> usize {
        self.z.len() * group.element_bytes()
    }
}

fn rounds(delay: u64) -> Result<u32> {
    if delay < 2 || !delay.is_power_of_two() {
        return Err(Error::Policy(format!("Pietrzak needs T a power of two >= 2, got {delay}")));
    }
    Ok(delay.trailing_zeros())
}

fn check_lambda(lambda: u32) -> Result<()> {
    if !(1..=256).contains(&lambda) {
        return Err(Error::Parameter(format!("challenge size must be 1..=256 bits, got {lambda}")));
    }
    Ok(())
}

fn challenge(group: &RsaGroup, u: &BigUint, t: u64, v: &BigUint, z: &BigUint, lambda: u32) -> BigUint {
    let digest = Sha256::new()
        .chain_update(CHALLENGE_DST)
        .chain_update(group.encode(u))
        .chain_update(t.to_be_bytes())
        .chain_update(group.encode(v))
        .chain_update(group.encode(z))
        .finalize();
    BigUint::from_bytes_be(&digest) % (BigUint::from(1u8) << lambda)
}

/// Computes `y = g^(2^T)` and the halving proof.
pub fn prove(group: &RsaGroup, g: &BigUint, delay: u64, lambda: u32, ctr: &mut OpCounter) -> Result<PietrzakProof> {
    let k = rounds(delay)?;
    check_lambda(lambda)?;
    group.check_base(g)?;
    let y = group.repeated_square(g, delay, ctr);

    let mut u = g.clone();
    let mut v = y.clone();
    let mut t = delay;
    let mut z = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let half = t / 2;
        let zi = group.repeated_square(&u, half, ctr);
        let r = challenge(group, &u, t, &v, &zi, lambda);
        let ur = group.pow(&u, &r, ctr);
        let zr = group.pow(&zi, &r, ctr);
        u = group.mul(&ur, &zi, ctr);
        v = group.mul(&zr, &v, ctr);
        z.push(zi);
        t = half;
    }
    Ok(PietrzakProof { y, z })
}

pub fn verify(
    group: &RsaGroup,
    g: &BigUint,
    delay: u64,
    lambda: u32,
    proof: &PietrzakProof,
    ctr: &mut OpCounter,
) -> Result<bool> {
    let k = rounds(delay)?;
    check_lambda(lambda)?;
    group.check_base(g)?;
    if proof.z.len() != k as usize {
        return Err(Error::Format(format!("proof has {} elements, expected {k}", proof.z.len())));
    }
    group.check_element(&proof.y, "y")?;
    for zi in &proof.z {
        group.check_element(zi, "z_i")?;
    }

    let mut u = g.clone();
    let mut v = proof.y.clone();
    let mut t = delay;
    for zi in &proof.z {
        let r = challenge(group, &u, t, &v, zi, lambda);
        let ur = group.pow(&u, &r, ctr);
        let zr = group.pow(zi, &r, ctr);
        u = group.mul(&ur, zi, ctr);
        v = group.mul(&zr, &v, ctr);
        t /= 2;
    }
    Ok(group.square(&u, ctr) == v)
}
