//! Single-squaring verifiable delay function over finite fields of order
//! `q = 3 (mod 4)`.
//!
//! Evaluation computes the principal square root `y = H(x)^((q+1)/4)` of a
//! hashed quadratic residue by a sequential square-and-multiply chain;
//! verification checks `y^2 = H(x)` with a single field squaring and needs no
//! proof. Pietrzak and Wesolowski repeated-squaring VDFs over an RSA group are
//! included as baselines, together with a benchmark harness that compares the
//! instrumented squaring counts of all three schemes.

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod error;
pub mod field;
pub mod hash_oracle;
pub mod params;
pub mod primality;
pub mod vdf;

mod encoding;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldParams, OpCounter};
pub use hash_oracle::OracleConfig;
pub use params::{DelayPolicy, PublicParams};
pub use vdf::{Announcement, VdfOutput};
