//! Exit criteria. Each test prints one `[PASS]`, `[FAIL]` or `[WARN]` line to
//! the real stdout (not the captured test output). Tests share a lock so
//! wall-clock measurements never overlap.

use std::collections::HashSet;
use std::io::Write;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::{BigUint, RandBigInt};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use ssvdf::baselines::{pietrzak, rsa_setup, wesolowski, RsaGroup};
use ssvdf::bench::probe;
use ssvdf::hash_oracle::hash_to_field_star;
use ssvdf::params::{find_irreducible, setup, setup_with};
use ssvdf::primality::{is_probable_prime, MR_ROUNDS};
use ssvdf::{vdf, DelayPolicy, FieldElement, FieldParams, OpCounter, OracleConfig, PublicParams};

// Criterion 1
const CORRECTNESS_INPUTS: usize = 10_000;
const CORRECTNESS_BUDGET: Duration = Duration::from_secs(120);
// Criterion 2
const VERIFY_DELAYS: [u64; 4] = [16, 256, 4096, 65_536];
const LARGE_DELAY_EXT_DEGREE: usize = 257;
// Criterion 3
const EVAL_COST_SETS: usize = 50;
// Criterion 4
const LEMMA_BOUND: u64 = 2000;
const LEMMA_BUDGET: Duration = Duration::from_secs(30);
// Criterion 6
const TAMPER_FLIPS: usize = 1000;
// Criteria 7 and 8
const BASELINE_DELAY: u64 = 4096;
const BASELINE_LAMBDA: u32 = 32;
const RSA_BITS: u64 = 512;
// Criterion 9
const TIMING_SHORT: u64 = 2048;
const TIMING_LONG: u64 = 8192;
const EVAL_RATIO_RANGE: (f64, f64) = (2.6, 5.4);
const VERIFY_RATIO_MAX: f64 = 2.0;
const TIMING_REPEATS: usize = 5;
const VERIFY_REPEATS: usize = 200;
// Criterion 10
const PROBE_THREADS: usize = 8;
const PROBE_MAX_SPEEDUP: f64 = 1.15;

fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(id: u32, status: &str, name: &str, detail: &str) {
    let line = format!("[{status}] criterion {id:>2}: {name} | {detail}\n");
    // Bypasses libtest capture.
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn gate(id: u32, name: &str, pass: bool, detail: String) {
    report(id, if pass { "PASS" } else { "FAIL" }, name, &detail);
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn prime_params(lambda: u32, delay: u64, seed: u64) -> PublicParams {
    setup(lambda, delay, &mut rng(seed)).unwrap()
}

fn params_for(delay: u64) -> &'static PublicParams {
    static CACHE: OnceLock<Mutex<Vec<(u64, &'static PublicParams)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut cache = cache.lock().unwrap();
    if let Some((_, pp)) = cache.iter().find(|(d, _)| *d == delay) {
        return pp;
    }
    let pp: &'static PublicParams = Box::leak(Box::new(prime_params(128, delay, delay)));
    cache.push((delay, pp));
    pp
}

fn small_field(q: u64, n: usize, seed: u64) -> PublicParams {
    let p = BigUint::from(q);
    let field = if n == 1 {
        FieldParams::prime(p).unwrap()
    } else {
        let f = find_irreducible(&p, n, &mut rng(seed));
        FieldParams::extension(p, f).unwrap()
    };
    PublicParams { lambda: 8, delay: 1, field, oracle: OracleConfig::default() }
}

/// Prime powers `p^n <= bound` with `p^n = 3 (mod 4)`, as `(p, n)`. `3^7` is
/// appended since it is the smallest degree-7 field.
fn small_prime_powers(bound: u64) -> Vec<(u64, usize)> {
    let primes: Vec<u64> = (3..=bound).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect();
    let mut out = Vec::new();
    for &p in &primes {
        let mut q = p;
        let mut n = 1;
        while q <= bound {
            if q % 4 == 3 {
                out.push((p, n));
            }
            q *= p;
            n += 1;
        }
    }
    out.push((3, 7));
    out
}

fn index_of(f: &FieldParams, e: &FieldElement) -> u64 {
    let p = f.characteristic().to_u64().unwrap();
    e.coeffs().iter().rev().fold(0, |acc, c| acc * p + c.to_u64().unwrap())
}

fn elements(f: &FieldParams) -> impl Iterator<Item = FieldElement> + '_ {
    let q = f.order().to_u64().unwrap();
    (0..q).map(move |i| f.element_from_index(&BigUint::from(i)))
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

#[test]
fn criterion_01_correctness() {
    let _g = serial();
    let pp = params_for(1024);
    let mut r = rng(1);
    let start = Instant::now();
    let mut accepted = 0;
    for _ in 0..CORRECTNESS_INPUTS {
        let x: [u8; 32] = r.gen();
        let out = vdf::eval(pp, &x).unwrap();
        if vdf::verify(pp, &x, &out.y, &mut OpCounter::new()).unwrap() {
            accepted += 1;
        }
    }
    let elapsed = start.elapsed();
    gate(
        1,
        "correctness",
        accepted == CORRECTNESS_INPUTS && elapsed < CORRECTNESS_BUDGET,
        format!(
            "{accepted}/{CORRECTNESS_INPUTS} accepted at lambda=128 T=1024 in {:.1} s (budget {} s)",
            elapsed.as_secs_f64(),
            CORRECTNESS_BUDGET.as_secs()
        ),
    );
}

#[test]
fn criterion_02_verify_cost() {
    let _g = serial();
    let mut observed = Vec::new();
    let mut ok = true;
    for delay in VERIFY_DELAYS {
        let x = format!("verify-cost-{delay}").into_bytes();
        let (pp, y, how) = if delay <= 4096 {
            let pp = params_for(delay);
            (pp.clone(), vdf::eval(pp, &x).unwrap().y, "eval")
        } else {
            // A prime of T bits is out of reach; use F_{p^257} and the
            // oracle preimage H'(x), itself a square root of H(x).
            let pp = setup_with(128, delay, LARGE_DELAY_EXT_DEGREE, &DelayPolicy::default(), &mut rng(delay)).unwrap();
            let y = hash_to_field_star(&x, &pp.field, &pp.oracle).unwrap();
            (pp, y, "H'(x)")
        };
        let mut ctr = OpCounter::new();
        let accept = vdf::verify(&pp, &x, &y, &mut ctr).unwrap();
        ok &= accept && ctr.squarings == 1 && ctr.multiplications == 0;
        observed.push(format!(
            "T={delay} (q {} bits, n={}, y from {how}): {} sq/{} mul {}",
            pp.field.order().bits(),
            pp.field.degree(),
            ctr.squarings,
            ctr.multiplications,
            if accept { "accept" } else { "reject" }
        ));
    }
    gate(2, "verify cost = 1 squaring", ok, observed.join("; "));
}

#[test]
fn criterion_03_eval_cost() {
    let _g = serial();
    let mut r = rng(3);
    let mut matches = 0;
    let mut chain_exact = 0;
    let mut offsets = HashSet::new();
    for i in 0..EVAL_COST_SETS {
        let lambda = r.gen_range(8..=128);
        let delay = r.gen_range(1..=512);
        let n = [1, 1, 3, 5][i % 4];
        let pp = setup_with(lambda, delay, n, &DelayPolicy::default(), &mut r).unwrap();
        let out = vdf::eval(&pp, format!("eval-cost-{i}").as_bytes()).unwrap();
        let q = pp.field.order();
        let q1: BigUint = q + 1u8;
        // ceil(log2(q + 1))
        let ceil_log = if q1.count_ones() == 1 { q1.bits() - 1 } else { q1.bits() };
        let predicted = ceil_log - 2;
        if out.eval_squarings == predicted {
            matches += 1;
        }
        offsets.insert(predicted as i64 - out.eval_squarings as i64);
        let chain = ((q + 1u8) >> 2u8).bits() - 1;
        if out.eval_squarings == chain && out.eval_squarings >= delay {
            chain_exact += 1;
        }
    }
    let mut offsets: Vec<_> = offsets.into_iter().collect();
    offsets.sort_unstable();
    gate(
        3,
        "eval squarings = ceil(log2(q+1)) - 2",
        matches == EVAL_COST_SETS,
        format!(
            "{matches}/{EVAL_COST_SETS} match; predicted - observed in {offsets:?}; \
             observed = bitlen((q+1)/4) - 1 >= T in {chain_exact}/{EVAL_COST_SETS}"
        ),
    );
}

#[test]
fn criterion_04_field_lemmas() {
    let _g = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    let cases = small_prime_powers(LEMMA_BOUND);
    for &(p, n) in &cases {
        let pp = small_field(p, n, p * 31 + n as u64);
        let f = &pp.field;
        let q = f.order().to_u64().unwrap();
        let mut ctr = OpCounter::new();
        let squares: HashSet<u64> =
            elements(f).skip(1).map(|a| index_of(f, &f.square(&a, &mut ctr).unwrap())).collect();
        if squares.len() as u64 != (q - 1) / 2 {
            failures.push(format!("q={q}: |QR| = {}", squares.len()));
        }
        let minus_one = f.neg(&f.one()).unwrap();
        if f.is_qr(&minus_one).unwrap() || squares.contains(&index_of(f, &minus_one)) {
            failures.push(format!("q={q}: -1 is a residue"));
        }
        for a in elements(f).skip(1) {
            let is_square = squares.contains(&index_of(f, &a));
            if f.is_qr(&a).unwrap() != is_square {
                failures.push(format!("q={q}: is_qr disagrees at {}", index_of(f, &a)));
                break;
            }
            if is_square {
                let r = f.sqrt_qr(&a, &mut ctr).unwrap();
                if f.square(&r, &mut ctr).unwrap() != a {
                    failures.push(format!("q={q}: sqrt fails at {}", index_of(f, &a)));
                    break;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let extensions: Vec<String> =
        cases.iter().filter(|c| c.1 > 1).map(|(p, n)| format!("{p}^{n}")).collect();
    gate(
        4,
        "residue lemmas by enumeration",
        failures.is_empty() && elapsed < LEMMA_BUDGET,
        format!(
            "{} fields (extensions {}) in {:.2} s (budget {} s); failures {:?}",
            cases.len(),
            extensions.join(","),
            elapsed.as_secs_f64(),
            LEMMA_BUDGET.as_secs(),
            failures
        ),
    );
}

#[test]
fn criterion_05_three_mod_four() {
    let _g = serial();
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in (2u64..100).filter(|&p| is_probable_prime(&BigUint::from(p), MR_ROUNDS)) {
        for n in 1u32..10 {
            let q_mod_4 = BigUint::from(p).pow(n) % 4u8;
            let lhs = p % 4 == 3 && n % 2 == 1;
            if lhs != (q_mod_4 == BigUint::from(3u8)) {
                bad.push((p, n));
            }
            checked += 1;
        }
    }
    gate(5, "p^n = 3 mod 4 iff p = 3 mod 4 and n odd", bad.is_empty(), format!("{checked} pairs, mismatches {bad:?}"));
}

#[test]
fn criterion_06_tamper() {
    let _g = serial();
    let pp = prime_params(256, 16, 6);
    let f = &pp.field;
    let mut r = rng(6);
    let mut accepted = 0;
    let mut rejected = 0;
    let mut malformed = 0;
    for i in 0..TAMPER_FLIPS {
        let x = format!("tamper-{i}").into_bytes();
        let y = f.encode(&vdf::eval(&pp, &x).unwrap().y);
        let mut bad = y.clone();
        let bit = r.gen_range(0..bad.len() * 8);
        bad[bit / 8] ^= 1 << (bit % 8);
        match vdf::verify_bytes(&pp, &x, &bad, &mut OpCounter::new()) {
            Ok(true) => accepted += 1,
            Ok(false) => rejected += 1,
            Err(_) => malformed += 1,
        }
    }

    let mut exhaustive = 0;
    let mut wrong = Vec::new();
    // F_3 has no element outside {0, 1, -1}, so the oracle is undefined there.
    let fields = small_prime_powers(LEMMA_BOUND).into_iter().filter(|c| (7..=LEMMA_BOUND).contains(&c.0.pow(c.1 as u32)));
    for (p, n) in fields {
        let pp = small_field(p, n, p * 31 + n as u64);
        let f = &pp.field;
        for i in 0u8..4 {
            let x = [i, p as u8];
            let y = vdf::eval(&pp, &x).unwrap().y;
            let mut expect = vec![index_of(f, &y), index_of(f, &f.neg(&y).unwrap())];
            expect.sort_unstable();
            let g = ssvdf::hash_oracle::hash_to_qr(&x, f, &pp.oracle).unwrap();
            let mut ctr = OpCounter::new();
            let accepting: Vec<u64> = elements(f)
                .filter(|w| f.square(w, &mut ctr).unwrap() == g)
                .map(|w| index_of(f, &w))
                .collect();
            let via_verify = accepting
                .iter()
                .all(|&w| vdf::verify(&pp, &x, &f.element_from_index(&BigUint::from(w)), &mut OpCounter::new()).unwrap());
            if accepting != expect || !via_verify {
                wrong.push((p, n, i));
            }
            exhaustive += 1;
        }
    }
    gate(
        6,
        "soundness against tampering",
        accepted == 0 && wrong.is_empty(),
        format!(
            "256-bit q: {TAMPER_FLIPS} bit flips -> {accepted} accepted, {rejected} rejected, {malformed} malformed; \
             q <= {LEMMA_BOUND}: {exhaustive} statements, accepting set != {{y, -y}} for {wrong:?}"
        ),
    );
}

struct BaselineRun {
    pietrzak: pietrzak::PietrzakProof,
    pietrzak_ok: bool,
    pietrzak_verify: OpCounter,
    wesolowski: wesolowski::WesolowskiProof,
    wesolowski_ok: bool,
    wesolowski_verify: OpCounter,
    group: RsaGroup,
}

fn baseline_run() -> &'static BaselineRun {
    static RUN: OnceLock<BaselineRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let mut r = rng(7);
        let group = rsa_setup(RSA_BITS, &mut r).unwrap();
        let g = r.gen_biguint_range(&BigUint::from(2u8), group.modulus());
        let pz = pietrzak::prove(&group, &g, BASELINE_DELAY, BASELINE_LAMBDA, &mut OpCounter::new()).unwrap();
        let mut pietrzak_verify = OpCounter::new();
        let pietrzak_ok =
            pietrzak::verify(&group, &g, BASELINE_DELAY, BASELINE_LAMBDA, &pz, &mut pietrzak_verify).unwrap();
        let wz = wesolowski::prove(&group, &g, BASELINE_DELAY, BASELINE_LAMBDA, &mut OpCounter::new()).unwrap();
        let mut wesolowski_verify = OpCounter::new();
        let wesolowski_ok =
            wesolowski::verify(&group, &g, BASELINE_DELAY, BASELINE_LAMBDA, &wz, &mut wesolowski_verify).unwrap();
        BaselineRun {
            pietrzak: pz,
            pietrzak_ok,
            pietrzak_verify,
            wesolowski: wz,
            wesolowski_ok,
            wesolowski_verify,
            group,
        }
    })
}

#[test]
fn criterion_07_baseline_costs() {
    let _g = serial();
    let pp = params_for(BASELINE_DELAY);
    let x = b"baseline-comparison";
    let y = vdf::eval(pp, x).unwrap().y;
    let mut ctr = OpCounter::new();
    let ssvdf_ok = vdf::verify(pp, x, &y, &mut ctr).unwrap();

    let run = baseline_run();
    let s = ctr.squarings;
    let w = run.wesolowski_verify.squarings;
    let p = run.pietrzak_verify.squarings;
    let log_t = BASELINE_DELAY.trailing_zeros() as u64;
    let lam = BASELINE_LAMBDA as u64;
    let ordered = s == 1 && s < w && w <= 4 * lam && 4 * lam < p;
    let bounded = (log_t..=2 * lam * log_t).contains(&p);
    gate(
        7,
        "baseline completeness and verifier cost ordering",
        ssvdf_ok && run.pietrzak_ok && run.wesolowski_ok && ordered && bounded,
        format!(
            "T={BASELINE_DELAY} lambda_test={BASELINE_LAMBDA} N {} bits: verify squarings ssvdf={s} wesolowski={w} \
             pietrzak={p}; 4*lambda={}; pietrzak range [{log_t}, {}]; completeness ssvdf={ssvdf_ok} \
             pietrzak={} wesolowski={}",
            run.group.bits(),
            4 * lam,
            2 * lam * log_t,
            run.pietrzak_ok,
            run.wesolowski_ok
        ),
    );
}

#[test]
fn criterion_08_proof_sizes() {
    let _g = serial();
    let pp = params_for(BASELINE_DELAY);
    let x = b"proof-size";
    let ann = vdf::Announcement::new(pp, x, &vdf::eval(pp, x).unwrap());
    let json: serde_json::Value = serde_json::from_str(&ann.to_json()).unwrap();
    let ssvdf_bytes = if json["pi"].is_null() { 0 } else { usize::MAX };

    let run = baseline_run();
    let pz = run.pietrzak.z.len();
    let log_t = BASELINE_DELAY.trailing_zeros() as usize;
    let wz_bytes = run.wesolowski.proof_bytes(&run.group);
    gate(
        8,
        "proof sizes",
        ssvdf_bytes == 0 && pz == log_t && wz_bytes == run.group.element_bytes(),
        format!(
            "ssvdf {ssvdf_bytes} bytes; pietrzak {pz} elements (log2 T = {log_t}), {} bytes; \
             wesolowski {} element of {wz_bytes} bytes",
            run.pietrzak.proof_bytes(&run.group),
            wz_bytes / run.group.element_bytes()
        ),
    );
}

fn timings(pp: &PublicParams) -> (f64, f64) {
    let x = b"timing";
    let eval: Vec<f64> = (0..TIMING_REPEATS)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(vdf::eval(pp, x).unwrap());
            ms(start.elapsed())
        })
        .collect();
    let y = vdf::eval(pp, x).unwrap().y;
    let verify: Vec<f64> = (0..TIMING_REPEATS)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..VERIFY_REPEATS {
                assert!(vdf::verify(pp, x, &y, &mut OpCounter::new()).unwrap());
            }
            ms(start.elapsed()) / VERIFY_REPEATS as f64
        })
        .collect();
    (median(eval), median(verify))
}

#[test]
fn criterion_09_timing_linearity() {
    let _g = serial();
    let short = params_for(TIMING_SHORT);
    let long = params_for(TIMING_LONG);
    let (eval_s, verify_s) = timings(short);
    let (eval_l, verify_l) = timings(long);
    let eval_ratio = eval_l / eval_s;
    let verify_ratio = verify_l.max(verify_s) / verify_l.min(verify_s);
    let (lo, hi) = EVAL_RATIO_RANGE;
    gate(
        9,
        "timing linearity",
        (lo..=hi).contains(&eval_ratio) && verify_ratio < VERIFY_RATIO_MAX,
        format!(
            "eval {eval_s:.2} ms (T={TIMING_SHORT}) -> {eval_l:.2} ms (T={TIMING_LONG}), ratio {eval_ratio:.2} \
             (need [{lo}, {hi}]); verify {verify_s:.4} ms -> {verify_l:.4} ms, ratio {verify_ratio:.2} \
             (need < {VERIFY_RATIO_MAX})"
        ),
    );
}

#[test]
fn criterion_10_parallel_probe() {
    let _g = serial();
    let pp = params_for(TIMING_LONG);
    let r = probe(pp, b"probe", PROBE_THREADS, 3).unwrap();
    let pass = r.speedup <= PROBE_MAX_SPEEDUP;
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    // Advisory only.
    report(
        10,
        if pass { "PASS" } else { "WARN" },
        "parallel probe (advisory)",
        &format!(
            "T={TIMING_LONG} {PROBE_THREADS} threads on {threads} cpus: sequential {:.1} ms, parallel {:.1} ms, \
             speedup {:.3} (limit {PROBE_MAX_SPEEDUP}); longest worker chain {} squarings",
            r.sequential_ms, r.parallel_ms, r.speedup, r.longest_chain_squarings
        ),
    );
}

#[test]
fn oracle_preimage_is_a_root() {
    let pp = prime_params(64, 32, 11);
    let mut ctr = OpCounter::new();
    for i in 0u32..100 {
        let x = i.to_be_bytes();
        let h = hash_to_field_star(&x, &pp.field, &pp.oracle).unwrap();
        assert!(vdf::verify(&pp, &x, &h, &mut ctr).unwrap());
        assert!(!h.is_zero() && !h.is_one());
    }
}
