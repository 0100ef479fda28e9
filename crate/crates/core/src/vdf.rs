//! Evaluation and verification of the single-squaring VDF.
//!
//! `eval` hashes the statement to `g = H(x)` and returns `y = g^((q+1)/4)`;
//! `verify` accepts iff `y^2 = H(x)`. There is no proof. Because the check is
//! `y^2 = g`, the additive inverse `-y` of an honest output verifies as well.

use serde::{Deserialize, Serialize};

use crate::encoding::serde_hex_bytes;
use crate::error::{Error, Result};
use crate::field::{FieldElement, OpCounter};
use crate::hash_oracle::hash_to_qr;
use crate::params::PublicParams;

/// Output of [`eval`]. The proof is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VdfOutput {
    pub y: FieldElement,
    /// Squarings performed by the evaluation chain (instrumentation only).
    pub eval_squarings: u64,
}

pub fn eval(pp: &PublicParams, x: &[u8]) -> Result<VdfOutput> {
    let mut ctr = OpCounter::new();
    let y = eval_counted(pp, x, &mut ctr)?;
    Ok(VdfOutput { y, eval_squarings: ctr.squarings })
}

/// [`eval`] charging every chain operation to `ctr`.
pub fn eval_counted(pp: &PublicParams, x: &[u8], ctr: &mut OpCounter) -> Result<FieldElement> {
    let g = hash_to_qr(x, &pp.field, &pp.oracle)?;
    let e = pp.field.sqrt_exponent()?;
    pp.field.pow(&g, &e, ctr)
}

/// [`eval`] plus the accumulator after each squaring of the chain. The trace
/// has `eval_squarings` entries and its last entry reaches `y` with at most
/// one multiplication by `H(x)`.
pub fn eval_with_trace(pp: &PublicParams, x: &[u8]) -> Result<(VdfOutput, Vec<FieldElement>)> {
    let g = hash_to_qr(x, &pp.field, &pp.oracle)?;
    let e = pp.field.sqrt_exponent()?;
    let mut ctr = OpCounter::new();
    let (y, trace) = pp.field.pow_with_trace(&g, &e, &mut ctr)?;
    Ok((VdfOutput { y, eval_squarings: ctr.squarings }, trace))
}

/// Accepts iff `y^2 = H(x)`. Charges exactly one squaring to `ctr`; the
/// oracle call is not charged. A `y` that does not belong to the field is a
/// format error rather than a rejection.
pub fn verify(pp: &PublicParams, x: &[u8], y: &FieldElement, ctr: &mut OpCounter) -> Result<bool> {
    let y_bytes_ok = y.coeffs().len() == pp.field.degree()
        && y.coeffs().iter().all(|c| c < pp.field.characteristic());
    if !y_bytes_ok {
        return Err(Error::Format("output is not an element of the parameter field".into()));
    }
    let g = hash_to_qr(x, &pp.field, &pp.oracle)?;
    Ok(pp.field.square(y, ctr)? == g)
}

/// [`verify`] on the byte encoding of `y`.
pub fn verify_bytes(pp: &PublicParams, x: &[u8], y_bytes: &[u8], ctr: &mut OpCounter) -> Result<bool> {
    let y = pp.field.decode(y_bytes)?;
    verify(pp, x, &y, ctr)
}

/// The published triple `(x, T, y)`; `pi` is always `null`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Announcement {
    #[serde(with = "serde_hex_bytes")]
    pub x: Vec<u8>,
    #[serde(rename = "T")]
    pub delay: u64,
    #[serde(with = "serde_hex_bytes")]
    pub y: Vec<u8>,
    pub pi: (),
}

impl Announcement {
    pub fn new(pp: &PublicParams, x: &[u8], out: &VdfOutput) -> Self {
        Self { x: x.to_vec(), delay: pp.delay, y: pp.field.encode(&out.y), pi: () }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Verifies the announced output. `T` is carried but not checked.
    pub fn verify(&self, pp: &PublicParams, ctr: &mut OpCounter) -> Result<bool> {
        verify_bytes(pp, &self.x, &self.y, ctr)
    }
}
