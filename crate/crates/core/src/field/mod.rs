//! Arithmetic in `F_p` and in extensions `F_p[x]/<f(x)>`, with every
//! squaring and multiplication tallied on an explicit [`OpCounter`].
//!
//! Elements are coefficient vectors over `F_p`, degree 0 first. Prime fields
//! are the degree-1 case with modulus polynomial `x`.

mod poly;

pub use poly::is_irreducible;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::encoding::to_fixed_be;
use crate::error::{Error, Result};

/// Tally of field (or group) operations performed by one computation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounter {
    pub squarings: u64,
    pub multiplications: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }
}

/// An element of `F_{p^n}`: exactly `n` coefficients, each in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<BigUint>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigUint> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }
}

/// Description of `F_q` with `q = p^n`: the characteristic `p` and a monic
/// modulus polynomial `f` of degree `n`.
///
/// Construction checks only the structure (odd `p`, monic `f`, reduced
/// coefficients). Primality of `p` and irreducibility of `f` are checked by
/// [`crate::params::validate`].
#[derive(Clone, Debug)]
pub struct FieldParams {
    p: BigUint,
    modulus: Vec<BigUint>,
    q: BigUint,
    // Nonzero terms of x^n mod f, i.e. (i, -f_i mod p) for i < n.
    reduction: Vec<(usize, BigUint)>,
    coeff_bytes: usize,
}

impl PartialEq for FieldParams {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldParams {}

impl FieldParams {
    /// The prime field `F_p`.
    pub fn prime(p: BigUint) -> Result<Self> {
        Self::extension(p, vec![BigUint::zero(), BigUint::one()])
    }

    /// `F_p[x]/<f(x)>` with `f` given from degree 0 upward.
    pub fn extension(p: BigUint, f: Vec<BigUint>) -> Result<Self> {
        if p < BigUint::from(3u8) || p.is_even() {
            return Err(Error::Parameter("characteristic must be an odd prime".into()));
        }
        if f.len() < 2 {
            return Err(Error::Parameter("modulus polynomial must have degree >= 1".into()));
        }
        if !f[f.len() - 1].is_one() {
            return Err(Error::Parameter("modulus polynomial must be monic".into()));
        }
        if f.iter().any(|c| c >= &p) {
            return Err(Error::Parameter("modulus coefficients must lie in [0, p)".into()));
        }
        let n = f.len() - 1;
        let q = num_traits::pow(p.clone(), n);
        let reduction = f[..n]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, &p - c))
            .collect();
        let coeff_bytes = p.bits().div_ceil(8) as usize;
        Ok(Self { p, modulus: f, q, reduction, coeff_bytes })
    }

    pub fn characteristic(&self) -> &BigUint {
        &self.p
    }

    /// Extension degree `n`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus_poly(&self) -> &[BigUint] {
        &self.modulus
    }

    /// Field order `q = p^n`.
    pub fn order(&self) -> &BigUint {
        &self.q
    }

    /// Bytes per coefficient in the wire encoding.
    pub fn coeff_bytes(&self) -> usize {
        self.coeff_bytes
    }

    pub fn element_bytes(&self) -> usize {
        self.coeff_bytes * self.degree()
    }

    pub fn is_3_mod_4(&self) -> bool {
        (&self.q % 4u8) == BigUint::from(3u8)
    }

    /// Exponent `(q+1)/4` of the principal square root.
    pub fn sqrt_exponent(&self) -> Result<BigUint> {
        if !self.is_3_mod_4() {
            return Err(Error::Parameter("square roots need q = 3 (mod 4)".into()));
        }
        Ok((&self.q + 1u8) >> 2)
    }

    /// Squarings performed by [`Self::sqrt_qr`]: `bitlen((q+1)/4) - 1`.
    pub fn sqrt_squarings(&self) -> Result<u64> {
        Ok(self.sqrt_exponent()?.bits().saturating_sub(1))
    }

    pub fn element(&self, coeffs: Vec<BigUint>) -> Result<FieldElement> {
        let e = FieldElement { coeffs };
        self.check(&e)?;
        Ok(e)
    }

    /// The constant `v mod p`.
    pub fn from_u64(&self, v: u64) -> FieldElement {
        let mut coeffs = vec![BigUint::zero(); self.degree()];
        coeffs[0] = BigUint::from(v) % &self.p;
        FieldElement { coeffs }
    }

    /// Element whose coefficients are the base-`p` digits of `index`
    /// (least significant first). Enumerates the field for `index < q`.
    pub fn element_from_index(&self, index: &BigUint) -> FieldElement {
        let mut rest = index % &self.q;
        let coeffs = (0..self.degree())
            .map(|_| {
                let (quot, digit) = rest.div_rem(&self.p);
                rest = quot;
                digit
            })
            .collect();
        FieldElement { coeffs }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_u64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.coeffs.len() != self.degree() {
            return Err(Error::Parameter(format!(
                "element has {} coefficients, field degree is {}",
                a.coeffs.len(),
                self.degree()
            )));
        }
        if a.coeffs.iter().any(|c| c >= &self.p) {
            return Err(Error::Parameter("element coefficient not reduced mod p".into()));
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| {
                let s = x + y;
                if s >= self.p {
                    s - &self.p
                } else {
                    s
                }
            })
            .collect();
        Ok(FieldElement { coeffs })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        let coeffs = a
            .coeffs
            .iter()
            .map(|c| if c.is_zero() { BigUint::zero() } else { &self.p - c })
            .collect();
        Ok(FieldElement { coeffs })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.add(a, &self.neg(b)?)
    }

    /// Product of two elements; counts one multiplication.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement, ctr: &mut OpCounter) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        ctr.multiplications += 1;
        Ok(self.mul_raw(&a.coeffs, &b.coeffs))
    }

    /// `a * a`; counts one squaring.
    pub fn square(&self, a: &FieldElement, ctr: &mut OpCounter) -> Result<FieldElement> {
        self.check(a)?;
        ctr.squarings += 1;
        Ok(self.square_raw(&a.coeffs))
    }

    /// `a^e` by left-to-right binary square-and-multiply. Performs exactly
    /// `max(bitlen(e) - 1, 0)` squarings.
    pub fn pow(&self, a: &FieldElement, e: &BigUint, ctr: &mut OpCounter) -> Result<FieldElement> {
        self.check(a)?;
        if e.is_zero() && a.is_zero() {
            return Err(Error::Domain("0^0 is undefined"));
        }
        Ok(self.pow_chain(a, e, ctr, None))
    }

    /// As [`Self::pow`], additionally returning the accumulator after every
    /// squaring (before the optional multiplication by `a`).
    pub fn pow_with_trace(
        &self,
        a: &FieldElement,
        e: &BigUint,
        ctr: &mut OpCounter,
    ) -> Result<(FieldElement, Vec<FieldElement>)> {
        self.check(a)?;
        if e.is_zero() && a.is_zero() {
            return Err(Error::Domain("0^0 is undefined"));
        }
        let mut trace = Vec::with_capacity(e.bits().saturating_sub(1) as usize);
        let r = self.pow_chain(a, e, ctr, Some(&mut trace));
        Ok((r, trace))
    }

    /// Multiplicative inverse as `a^(q-2)`.
    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::Domain("zero has no inverse"));
        }
        let e = &self.q - 2u8;
        Ok(self.pow_chain(a, &e, &mut OpCounter::new(), None))
    }

    /// Euler's criterion: `a^((q-1)/2) = 1`.
    pub fn is_qr(&self, a: &FieldElement) -> Result<bool> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::Domain("quadratic character of zero is undefined"));
        }
        let e = (&self.q - 1u8) >> 1;
        Ok(self.pow_chain(a, &e, &mut OpCounter::new(), None).is_one())
    }

    /// Principal square root `a^((q+1)/4)` of a nonzero quadratic residue.
    /// The result is itself a quadratic residue.
    pub fn sqrt_qr(&self, a: &FieldElement, ctr: &mut OpCounter) -> Result<FieldElement> {
        let e = self.sqrt_exponent()?;
        if !self.is_qr(a)? {
            return Err(Error::Domain("not a quadratic residue"));
        }
        Ok(self.pow_chain(a, &e, ctr, None))
    }

    /// `n` big-endian blocks of [`Self::coeff_bytes`] bytes, degree 0 first.
    pub fn encode(&self, a: &FieldElement) -> Vec<u8> {
        a.coeffs.iter().flat_map(|c| to_fixed_be(c, self.coeff_bytes)).collect()
    }

    pub fn decode(&self, bytes: &[u8]) -> Result<FieldElement> {
        if bytes.len() != self.element_bytes() {
            return Err(Error::Format(format!(
                "field element encoding has {} bytes, expected {}",
                bytes.len(),
                self.element_bytes()
            )));
        }
        let coeffs: Vec<BigUint> = bytes.chunks(self.coeff_bytes).map(BigUint::from_bytes_be).collect();
        if coeffs.iter().any(|c| c >= &self.p) {
            return Err(Error::Format("field element coefficient out of range".into()));
        }
        Ok(FieldElement { coeffs })
    }

    fn pow_chain(
        &self,
        a: &FieldElement,
        e: &BigUint,
        ctr: &mut OpCounter,
        mut trace: Option<&mut Vec<FieldElement>>,
    ) -> FieldElement {
        let bits = e.bits();
        if bits == 0 {
            return self.one();
        }
        let mut acc = a.clone();
        for i in (0..bits - 1).rev() {
            acc = self.square_raw(&acc.coeffs);
            ctr.squarings += 1;
            if let Some(t) = trace.as_deref_mut() {
                t.push(acc.clone());
            }
            if e.bit(i) {
                acc = self.mul_raw(&acc.coeffs, &a.coeffs);
                ctr.multiplications += 1;
            }
        }
        acc
    }

    fn mul_raw(&self, a: &[BigUint], b: &[BigUint]) -> FieldElement {
        let n = self.degree();
        if n == 1 {
            return FieldElement { coeffs: vec![(&a[0] * &b[0]) % &self.p] };
        }
        let mut prod = vec![BigUint::zero(); 2 * n - 1];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate() {
                prod[i + j] += ai * bj;
            }
        }
        self.reduce(prod)
    }

    fn square_raw(&self, a: &[BigUint]) -> FieldElement {
        let n = self.degree();
        if n == 1 {
            return FieldElement { coeffs: vec![(&a[0] * &a[0]) % &self.p] };
        }
        let mut diag = vec![BigUint::zero(); 2 * n - 1];
        let mut cross = vec![BigUint::zero(); 2 * n - 1];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            diag[2 * i] = ai * ai;
            for (j, aj) in a.iter().enumerate().skip(i + 1) {
                cross[i + j] += ai * aj;
            }
        }
        let prod = diag.into_iter().zip(cross).map(|(d, c)| d + (c << 1)).collect();
        self.reduce(prod)
    }

    /// Reduces an unreduced product of degree `< 2n - 1` modulo `f` and `p`.
    fn reduce(&self, mut prod: Vec<BigUint>) -> FieldElement {
        let n = self.degree();
        for k in (n..prod.len()).rev() {
            let top = std::mem::take(&mut prod[k]) % &self.p;
            if top.is_zero() {
                continue;
            }
            for (i, neg_fi) in &self.reduction {
                prod[k - n + i] += &top * neg_fi;
            }
        }
        prod.truncate(n);
        for c in &mut prod {
            *c = &*c % &self.p;
        }
        FieldElement { coeffs: prod }
    }
}
