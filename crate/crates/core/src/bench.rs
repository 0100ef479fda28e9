//! Benchmark harness comparing the three schemes by wall clock and by
//! instrumented operation counts, plus a naive parallel-evaluation probe.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{pietrzak, rsa_setup, wesolowski};
use crate::error::{Error, Result};
use crate::field::{FieldElement, OpCounter};
use crate::hash_oracle::hash_to_qr;
use crate::params::{setup_with, DelayPolicy, PublicParams};
use crate::vdf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Ssvdf,
    Pietrzak,
    Wesolowski,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ssvdf" => Ok(Self::Ssvdf),
            "pietrzak" => Ok(Self::Pietrzak),
            "wesolowski" => Ok(Self::Wesolowski),
            other => Err(Error::Parameter(format!("unknown scheme {other:?}"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ssvdf => "ssvdf",
            Self::Pietrzak => "pietrzak",
            Self::Wesolowski => "wesolowski",
        })
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub delays: Vec<u64>,
    pub schemes: Vec<Scheme>,
    /// Security parameter for the single-squaring VDF.
    pub lambda: u32,
    pub ext_degree: usize,
    pub policy: DelayPolicy,
    /// Challenge size for the baselines.
    pub baseline_lambda: u32,
    pub rsa_bits: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            delays: vec![64, 256, 1024],
            schemes: vec![Scheme::Ssvdf, Scheme::Pietrzak, Scheme::Wesolowski],
            lambda: 128,
            ext_degree: 1,
            policy: DelayPolicy::default(),
            baseline_lambda: 32,
            rsa_bits: 512,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub scheme: Scheme,
    #[serde(rename = "T")]
    pub delay: u64,
    /// Bit length of `q` (ssvdf) or `N` (baselines).
    pub group_bits: u64,
    pub setup_wall_ms: f64,
    pub eval_wall_ms: f64,
    pub verify_wall_ms: f64,
    pub eval_squarings: u64,
    pub eval_multiplications: u64,
    pub verify_squarings: u64,
    pub verify_multiplications: u64,
    pub proof_elements: usize,
    pub proof_bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub cpu: String,
    pub threads: usize,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn detect() -> Self {
        let cpu = std::fs::read_to_string("/proc/cpuinfo")
            .ok()
            .and_then(|s| {
                s.lines()
                    .find(|l| l.starts_with("model name"))
                    .and_then(|l| l.split(':').nth(1))
                    .map(|m| m.trim().to_string())
            })
            .unwrap_or_else(|| "unknown".to_string());
        Self {
            cpu,
            threads: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub lambda: u32,
    pub baseline_lambda: u32,
    pub rsa_bits: u64,
    pub hash_to_prime: String,
    pub environment: Environment,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, scheme: Scheme, delay: u64) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.scheme == scheme && r.delay == delay)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<11} {:>7} {:>6} {:>10} {:>11} {:>11} {:>9} {:>9} {:>7} {:>7}",
            "scheme", "T", "bits", "setup_ms", "eval_ms", "verify_ms", "eval_sq", "verify_sq", "proof#", "proof_B"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<11} {:>7} {:>6} {:>10.2} {:>11.3} {:>11.4} {:>9} {:>9} {:>7} {:>7}",
                r.scheme.to_string(),
                r.delay,
                r.group_bits,
                r.setup_wall_ms,
                r.eval_wall_ms,
                r.verify_wall_ms,
                r.eval_squarings,
                r.verify_squarings,
                r.proof_elements,
                r.proof_bytes
            );
        }
        out
    }
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Completeness(what()))
    }
}

/// Runs one honest evaluate/verify per (scheme, delay) and cross-checks the
/// counters against the expected costs before returning.
pub fn run_bench<R: Rng + ?Sized>(cfg: &BenchConfig, rng: &mut R) -> Result<BenchReport> {
    let mut rows = Vec::new();
    for &scheme in &cfg.schemes {
        match scheme {
            Scheme::Ssvdf => {
                for &delay in &cfg.delays {
                    rows.push(bench_ssvdf(cfg, delay, rng)?);
                }
            }
            Scheme::Pietrzak | Scheme::Wesolowski => {
                let start = Instant::now();
                let group = rsa_setup(cfg.rsa_bits, rng)?;
                let setup_ms = ms_since(start);
                for &delay in &cfg.delays {
                    let g = rng.gen_biguint_range(&BigUint::from(2u8), group.modulus());
                    let lambda = cfg.baseline_lambda;
                    let (mut pc, mut vc) = (OpCounter::new(), OpCounter::new());
                    let (eval_ms, verify_ms, ok, elements, bytes) = if scheme == Scheme::Pietrzak {
                        let start = Instant::now();
                        let proof = pietrzak::prove(&group, &g, delay, lambda, &mut pc)?;
                        let eval_ms = ms_since(start);
                        let start = Instant::now();
                        let ok = pietrzak::verify(&group, &g, delay, lambda, &proof, &mut vc)?;
                        let k = delay.trailing_zeros() as usize;
                        require(proof.z.len() == k, || format!("pietrzak proof length at T={delay}"))?;
                        (eval_ms, ms_since(start), ok, proof.z.len(), proof.proof_bytes(&group))
                    } else {
                        let start = Instant::now();
                        let proof = wesolowski::prove(&group, &g, delay, lambda, &mut pc)?;
                        let eval_ms = ms_since(start);
                        let start = Instant::now();
                        let ok = wesolowski::verify(&group, &g, delay, lambda, &proof, &mut vc)?;
                        require(vc.squarings <= 4 * lambda as u64, || {
                            format!("wesolowski verifier used {} squarings", vc.squarings)
                        })?;
                        (eval_ms, ms_since(start), ok, 1, proof.proof_bytes(&group))
                    };
                    require(ok, || format!("{scheme} proof rejected at T={delay}"))?;
                    require(pc.squarings >= delay, || format!("{scheme} prover squarings below T"))?;
                    rows.push(BenchRow {
                        scheme,
                        delay,
                        group_bits: group.bits(),
                        setup_wall_ms: setup_ms,
                        eval_wall_ms: eval_ms,
                        verify_wall_ms: verify_ms,
                        eval_squarings: pc.squarings,
                        eval_multiplications: pc.multiplications,
                        verify_squarings: vc.squarings,
                        verify_multiplications: vc.multiplications,
                        proof_elements: elements,
                        proof_bytes: bytes,
                    });
                }
            }
        }
    }
    Ok(BenchReport {
        lambda: cfg.lambda,
        baseline_lambda: cfg.baseline_lambda,
        rsa_bits: cfg.rsa_bits,
        hash_to_prime: wesolowski::ELL_DERIVATION.to_string(),
        environment: Environment::detect(),
        rows,
    })
}

fn bench_ssvdf<R: Rng + ?Sized>(cfg: &BenchConfig, delay: u64, rng: &mut R) -> Result<BenchRow> {
    let start = Instant::now();
    let pp = setup_with(cfg.lambda, delay, cfg.ext_degree, &cfg.policy, rng)?;
    let setup_ms = ms_since(start);
    let x: [u8; 32] = rng.gen();

    let mut ec = OpCounter::new();
    let start = Instant::now();
    let y = vdf::eval_counted(&pp, &x, &mut ec)?;
    let eval_ms = ms_since(start);

    let mut vc = OpCounter::new();
    let start = Instant::now();
    let ok = vdf::verify(&pp, &x, &y, &mut vc)?;
    let verify_ms = ms_since(start);

    require(ok, || format!("ssvdf output rejected at T={delay}"))?;
    require(vc == OpCounter { squarings: 1, multiplications: 0 }, || {
        format!("ssvdf verify used {vc:?}")
    })?;
    require(ec.squarings == pp.field.sqrt_squarings()? && ec.squarings >= delay, || {
        format!("ssvdf eval used {} squarings at T={delay}", ec.squarings)
    })?;
    Ok(BenchRow {
        scheme: Scheme::Ssvdf,
        delay,
        group_bits: pp.field.order().bits(),
        setup_wall_ms: setup_ms,
        eval_wall_ms: eval_ms,
        verify_wall_ms: verify_ms,
        eval_squarings: ec.squarings,
        eval_multiplications: ec.multiplications,
        verify_squarings: vc.squarings,
        verify_multiplications: vc.multiplications,
        proof_elements: 0,
        proof_bytes: 0,
    })
}

/// Threshold `eps` of the sequentiality check `sigma(T) >= (1 - eps) T`.
pub const PROBE_EPSILON: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub threads: usize,
    #[serde(rename = "T")]
    pub delay: u64,
    pub sequential_ms: f64,
    pub parallel_ms: f64,
    pub speedup: f64,
    /// Longest squaring chain executed by any worker.
    pub longest_chain_squarings: u64,
    pub epsilon: f64,
    /// Whether the parallel time stays at or above `(1 - eps)` of the sequential time.
    pub consistent: bool,
}

/// Splits `e` into at most `k` contiguous bit ranges that sum to `e`.
pub fn split_exponent(e: &BigUint, k: usize) -> Vec<BigUint> {
    let bits = e.bits();
    let k = (k.max(1) as u64).min(bits.max(1));
    let width = bits.div_ceil(k);
    (0..k)
        .map(|j| {
            let lo = (j * width).min(bits);
            let hi = ((j + 1) * width).min(bits);
            let mask = (BigUint::one() << (hi - lo)) - 1u8;
            ((e >> lo) & mask) << lo
        })
        .filter(|part| !part.is_zero())
        .collect()
}

fn parallel_pow(pp: &PublicParams, g: &FieldElement, parts: &[BigUint]) -> Result<(FieldElement, u64)> {
    let results: Vec<Result<(FieldElement, OpCounter)>> = std::thread::scope(|s| {
        let handles: Vec<_> = parts
            .iter()
            .map(|part| {
                s.spawn(move || {
                    let mut ctr = OpCounter::new();
                    pp.field.pow(g, part, &mut ctr).map(|r| (r, ctr))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut acc = pp.field.one();
    let mut longest = 0;
    let mut ctr = OpCounter::new();
    for r in results {
        let (value, c) = r?;
        longest = longest.max(c.squarings);
        acc = pp.field.mul(&acc, &value, &mut ctr)?;
    }
    Ok((acc, longest))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

/// Times evaluation with the exponent split across `threads` workers, each
/// raising `H(x)` to one bit range of `(q+1)/4`, against the single-worker
/// chain. Each timing is the median of `repeats` runs.
pub fn probe(pp: &PublicParams, x: &[u8], threads: usize, repeats: usize) -> Result<ProbeReport> {
    if threads == 0 {
        return Err(Error::Parameter("thread count must be at least 1".into()));
    }
    let repeats = repeats.max(1);
    let g = hash_to_qr(x, &pp.field, &pp.oracle)?;
    let e = pp.field.sqrt_exponent()?;
    let expected = vdf::eval(pp, x)?.y;

    let mut sequential = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let y = pp.field.pow(&g, &e, &mut OpCounter::new())?;
        sequential.push(ms_since(start));
        debug_assert_eq!(y, expected);
    }
    let parts = split_exponent(&e, threads);
    let mut parallel = Vec::with_capacity(repeats);
    let mut longest = 0;
    for _ in 0..repeats {
        let start = Instant::now();
        let (y, chain) = parallel_pow(pp, &g, &parts)?;
        parallel.push(ms_since(start));
        longest = chain;
        if y != expected {
            return Err(Error::Completeness("parallel evaluation disagrees with eval".into()));
        }
    }
    let (sequential_ms, parallel_ms) = if threads == 1 {
        let t = median(sequential);
        (t, t)
    } else {
        (median(sequential), median(parallel))
    };
    let speedup = sequential_ms / parallel_ms;
    Ok(ProbeReport {
        threads,
        delay: pp.delay,
        sequential_ms,
        parallel_ms,
        speedup,
        longest_chain_squarings: longest,
        epsilon: PROBE_EPSILON,
        consistent: parallel_ms >= (1.0 - PROBE_EPSILON) * sequential_ms,
    })
}
