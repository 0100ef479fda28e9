//! Canonical hex helpers shared by the JSON file formats.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Lowercase hex without leading zeros; zero is `"0"`.
pub(crate) fn biguint_to_hex(v: &BigUint) -> String {
    v.to_str_radix(16)
}

pub(crate) fn biguint_from_hex(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::Format(format!("invalid hex integer {s:?}")));
    }
    BigUint::parse_bytes(s.as_bytes(), 16)
        .ok_or_else(|| Error::Format(format!("invalid hex integer {s:?}")))
}

/// Fixed-width big-endian encoding; `v` must fit in `width` bytes.
pub(crate) fn to_fixed_be(v: &BigUint, width: usize) -> Vec<u8> {
    let raw = v.to_bytes_be();
    debug_assert!(raw.len() <= width || v.bits() == 0);
    let mut out = vec![0u8; width];
    if v.bits() > 0 {
        out[width - raw.len()..].copy_from_slice(&raw);
    }
    out
}

pub(crate) mod serde_hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        hex::decode(&s).map_err(serde::de::Error::custom)
    }
}
