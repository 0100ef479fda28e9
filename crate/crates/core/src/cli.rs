//! Command-line front end. Exit codes: 0 accept/success, 1 reject,
//! 2 format, usage or any other error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::bench::{probe, run_bench, BenchConfig, Scheme};
use crate::error::{Error, Result};
use crate::field::OpCounter;
use crate::params::{setup_with, validate, DelayPolicy, PublicParams};
use crate::vdf::{self, Announcement};

pub const EXIT_ACCEPT: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ssvdf", version, about = "Single-squaring verifiable delay function")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate public parameters.
    Setup(SetupArgs),
    /// Evaluate the VDF and write an announcement.
    Eval(EvalArgs),
    /// Verify an announcement (exit 0 accept, 1 reject, 2 malformed).
    Verify(VerifyArgs),
    /// Compare ssvdf, Pietrzak and Wesolowski.
    Bench(BenchArgs),
    /// Time a naive multi-threaded evaluation against the sequential one.
    Probe(ProbeArgs),
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// RNG seed; falls back to SSVDF_SEED, then to OS entropy.
    #[arg(long, env = "SSVDF_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SetupArgs {
    #[arg(long)]
    pub lambda: u32,
    #[arg(long = "delay")]
    pub delay: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long = "ext-degree", default_value_t = 1)]
    pub ext_degree: usize,
    /// Delay bound T <= lambda^k.
    #[arg(long = "max-delay-exponent", default_value_t = 3)]
    pub max_delay_exponent: u32,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// Statement as hex.
    #[arg(long, conflicts_with = "input_file", required_unless_present = "input_file")]
    pub input: Option<String>,
    /// Statement read as raw bytes from a file.
    #[arg(long = "input-file")]
    pub input_file: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub announcement: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024")]
    pub delays: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "ssvdf,pietrzak,wesolowski")]
    pub schemes: Vec<String>,
    #[arg(long, default_value_t = 128)]
    pub lambda: u32,
    /// Challenge size for the baselines.
    #[arg(long = "baseline-lambda", default_value_t = 32)]
    pub baseline_lambda: u32,
    #[arg(long = "rsa-bits", default_value_t = 512)]
    pub rsa_bits: u64,
    #[arg(long = "ext-degree", default_value_t = 1)]
    pub ext_degree: usize,
    #[arg(long = "max-delay-exponent", default_value_t = 3)]
    pub max_delay_exponent: u32,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Statement as hex.
    #[arg(long, default_value = "70726f6265")]
    pub input: String,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn make_rng(seed: &SeedArg) -> Result<ChaCha20Rng> {
    match seed.seed {
        Some(s) => Ok(ChaCha20Rng::seed_from_u64(s)),
        None => ChaCha20Rng::from_rng(rand::rngs::OsRng).map_err(|e| Error::Environment(e.to_string())),
    }
}

fn read_params(path: &Path) -> Result<PublicParams> {
    let pp = PublicParams::from_json(&std::fs::read_to_string(path)?)?;
    let v = validate(&pp);
    if !v.is_valid() {
        return Err(Error::Format(format!("invalid parameters: {}", v.issues.join("; "))));
    }
    Ok(pp)
}

fn parse_hex_input(s: &str) -> Result<Vec<u8>> {
    hex::decode(s).map_err(|e| Error::Format(format!("--input is not hex: {e}")))
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Setup(a) => cmd_setup(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Probe(a) => cmd_probe(a),
    }
}

fn cmd_setup(a: SetupArgs) -> Result<i32> {
    let mut rng = make_rng(&a.seed)?;
    let policy = DelayPolicy { max_exponent: a.max_delay_exponent };
    let start = Instant::now();
    let pp = setup_with(a.lambda, a.delay, a.ext_degree, &policy, &mut rng)?;
    let elapsed = start.elapsed();
    std::fs::write(&a.out, pp.to_json())?;
    println!("q bits: {}", pp.field.order().bits());
    println!("expected eval squarings: {}", pp.field.sqrt_squarings()?);
    println!("setup time: {:.3} ms", elapsed.as_secs_f64() * 1e3);
    Ok(EXIT_ACCEPT)
}

fn cmd_eval(a: EvalArgs) -> Result<i32> {
    let pp = read_params(&a.params)?;
    let x = match (&a.input, &a.input_file) {
        (Some(h), _) => parse_hex_input(h)?,
        (None, Some(path)) => std::fs::read(path)?,
        (None, None) => return Err(Error::Parameter("one of --input or --input-file is required".into())),
    };
    let start = Instant::now();
    let out = vdf::eval(&pp, &x)?;
    let elapsed = start.elapsed();
    std::fs::write(&a.out, Announcement::new(&pp, &x, &out).to_json())?;
    println!("eval squarings: {}", out.eval_squarings);
    println!("eval time: {:.3} ms", elapsed.as_secs_f64() * 1e3);
    Ok(EXIT_ACCEPT)
}

fn cmd_verify(a: VerifyArgs) -> Result<i32> {
    let pp = read_params(&a.params)?;
    let ann = Announcement::from_json(&std::fs::read_to_string(&a.announcement)?)?;
    let mut ctr = OpCounter::new();
    let ok = ann.verify(&pp, &mut ctr)?;
    println!("verify squarings: {}", ctr.squarings);
    if ok {
        println!("accept");
        Ok(EXIT_ACCEPT)
    } else {
        println!("reject");
        Ok(EXIT_REJECT)
    }
}

fn cmd_bench(a: BenchArgs) -> Result<i32> {
    let schemes = a.schemes.iter().map(|s| s.trim().parse::<Scheme>()).collect::<Result<Vec<_>>>()?;
    let cfg = BenchConfig {
        delays: a.delays,
        schemes,
        lambda: a.lambda,
        ext_degree: a.ext_degree,
        policy: DelayPolicy { max_exponent: a.max_delay_exponent },
        baseline_lambda: a.baseline_lambda,
        rsa_bits: a.rsa_bits,
    };
    let mut rng = make_rng(&a.seed)?;
    let report = run_bench(&cfg, &mut rng)?;
    print!("{}", report.to_table());
    if let Some(path) = a.json {
        std::fs::write(path, report.to_json())?;
    }
    Ok(EXIT_ACCEPT)
}

fn cmd_probe(a: ProbeArgs) -> Result<i32> {
    let pp = read_params(&a.params)?;
    let x = parse_hex_input(&a.input)?;
    let report = probe(&pp, &x, a.threads, a.repeats)?;
    println!("threads: {}", report.threads);
    println!("sequential: {:.3} ms", report.sequential_ms);
    println!("parallel: {:.3} ms", report.parallel_ms);
    println!("speedup: {:.3}", report.speedup);
    println!(
        "{} with sigma(T) >= (1 - {}) T",
        if report.consistent { "consistent" } else { "inconsistent" },
        report.epsilon
    );
    if let Some(path) = a.json {
        std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    Ok(EXIT_ACCEPT)
}
