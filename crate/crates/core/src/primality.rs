//! Miller-Rabin probable-prime testing and prime sampling.

use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

/// Rounds used everywhere a primality decision is made (error < 4^-64).
pub const MR_ROUNDS: usize = 64;

const SIEVE_LIMIT: u32 = 1 << 16;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SIEVE_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::new();
        for i in 2..limit {
            if !composite[i] {
                primes.push(i as u32);
                for j in (i * i..limit).step_by(i) {
                    composite[j] = true;
                }
            }
        }
        primes
    })
}

/// Result of trial division: `Some(answer)` when it decides, `None` otherwise.
fn trial_division(n: &BigUint) -> Option<bool> {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return Some(false);
        }
        for &p in small_primes() {
            let p = p as u64;
            if p * p > small {
                return Some(true);
            }
            if small % p == 0 {
                return Some(small == p);
            }
        }
        return None;
    }
    for &p in small_primes() {
        if (n % p).is_zero() {
            return Some(false);
        }
    }
    None
}

/// Miller-Rabin with `rounds` bases. Bases are drawn from a ChaCha stream
/// seeded by a hash of `n`, so the answer is a pure function of `n`.
pub fn is_probable_prime(n: &BigUint, rounds: usize) -> bool {
    if let Some(answer) = trial_division(n) {
        return answer;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    let seed: [u8; 32] = Sha256::new()
        .chain_update(b"SSVDF-v1-MR")
        .chain_update(n.to_bytes_be())
        .finalize()
        .into();
    let mut rng = ChaCha20Rng::from_seed(seed);
    let two = BigUint::from(2u8);

    'bases: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Uniformly samples a `bits`-bit probable prime `p` with `p = 3 (mod 4)`.
pub fn sample_prime_3mod4<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> BigUint {
    sample_prime_congruent(bits, 1, rng)
}

/// Uniformly samples a `bits`-bit probable prime with `p = 3 (mod 4)` and
/// `p = 1 (mod m)` for odd `m`. Panics if no such `bits`-bit integer exists.
pub(crate) fn sample_prime_congruent<R: Rng + ?Sized>(bits: u64, m: u64, rng: &mut R) -> BigUint {
    assert!(bits >= 3, "prime size must be at least 3 bits");
    assert!(m % 2 == 1, "modulus must be odd");
    // CRT: residue r0 mod 4m with r0 = 3 (mod 4), r0 = 1 (mod m).
    let period = BigUint::from(4 * m);
    let r0 = BigUint::from((0..4 * m).find(|r| r % 4 == 3 && r % m == 1 % m).unwrap());
    let top = BigUint::one() << (bits - 1);
    let bound = BigUint::one() << bits;
    assert!(
        &top + &period <= bound || m == 1,
        "no room for the requested congruence at this size"
    );
    loop {
        let raw = rng.gen_biguint(bits) | &top;
        let candidate = &raw - (&raw % &period) + &r0;
        if candidate < top || candidate >= bound {
            continue;
        }
        if is_probable_prime(&candidate, MR_ROUNDS) {
            return candidate;
        }
    }
}

/// Distinct prime factors of a machine-size integer.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
