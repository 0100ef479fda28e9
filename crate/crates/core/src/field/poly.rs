//! Dense polynomials over `F_p` and Rabin's irreducibility test.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{FieldElement, FieldParams, OpCounter};
use crate::primality::prime_factors;

fn trim(mut a: Vec<BigUint>) -> Vec<BigUint> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn inv_mod(a: &BigUint, p: &BigUint) -> BigUint {
    a.modpow(&(p - 2u8), p)
}

/// Remainder of `a` modulo a nonzero `b`.
fn rem(a: &[BigUint], b: &[BigUint], p: &BigUint) -> Vec<BigUint> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(&b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = (r.last().unwrap() * &lead_inv) % p;
        for (i, bi) in b.iter().enumerate() {
            let sub = (&factor * bi) % p;
            let t = &mut r[shift + i];
            *t = (&*t + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn gcd(a: &[BigUint], b: &[BigUint], p: &BigUint) -> Vec<BigUint> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: a monic `f` of degree `n` over `F_p` is irreducible iff
/// `x^(p^n) = x (mod f)` and `gcd(x^(p^(n/r)) - x, f) = 1` for every prime `r | n`.
///
/// Binomials `x^n - a` with `n | p - 1` have `x^(p^k) = c^k x` where
/// `c = a^((p-1)/n)`, so the Frobenius powers are evaluated in closed form.
///
/// `f` must be monic with reduced coefficients and `p` an odd prime.
pub fn is_irreducible(p: &BigUint, f: &[BigUint]) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let divisors = prime_factors(n as u64);

    let is_binomial = !f[0].is_zero() && f[1..n].iter().all(Zero::is_zero);
    if is_binomial && ((p - 1u8) % n).is_zero() {
        let a = p - &f[0];
        let c = a.modpow(&((p - 1u8) / n), p);
        return divisors.iter().all(|&r| !c.modpow(&BigUint::from(n as u64 / r), p).is_one());
    }

    let field = match FieldParams::extension(p.clone(), f.to_vec()) {
        Ok(field) => field,
        Err(_) => return false,
    };
    let mut x_coeffs = vec![BigUint::zero(); n];
    x_coeffs[1] = BigUint::one();
    let x = FieldElement { coeffs: x_coeffs };

    // frobenius[k] = x^(p^k) mod f
    let mut frobenius = Vec::with_capacity(n + 1);
    frobenius.push(x.clone());
    let mut ctr = OpCounter::new();
    for k in 1..=n {
        let next = field.pow_chain(&frobenius[k - 1], p, &mut ctr, None);
        frobenius.push(next);
    }
    if frobenius[n] != x {
        return false;
    }
    divisors.iter().all(|&r| {
        let k = n / r.to_usize().unwrap();
        let h = field.sub(&frobenius[k], &x).expect("same field");
        let g = gcd(f, h.coeffs(), p);
        g.len() == 1
    })
}
