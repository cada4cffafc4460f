//! Point counts of y² = x^m − 1 over prime fields and the statistics of
//! the normalized trace across a sweep of primes.
//!
//! For an odd prime q of good reduction the trace of Frobenius is the
//! character sum t = −Σ_x χ(x^m − 1). The map x ↦ x^m folds the sum onto
//! the subgroup H of e-th powers with e = gcd(m, q−1), so one quadratic
//! table plus a walk over H evaluates it in O(q) time. The trace vanishes
//! identically when q ≢ 1 (mod p) for m = p², and the sweep skips the
//! character sum on those primes.

use std::collections::HashMap;
use std::fs;
use std::io::{Seek, Write};
use std::path::{Path, PathBuf};

use num_integer::gcd;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u32),
    #[error("bad reduction at q={q} for exponent m={m}")]
    BadReduction { q: u64, m: u32 },
    #[error("curve exponent m={0} must be an odd integer at least 3")]
    InvalidExponent(u32),
    #[error("{a} does not generate the units modulo {p}^2")]
    NotAGenerator { a: u32, p: u32 },
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error("stored sweep state does not match the configuration: {0}")]
    ConfigMismatch(String),
    #[error("malformed record data: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One prime's worth of sweep output. `residue_class` is the discrete log
/// k of q modulo p² base the sweep generator, so Frobenius acts through
/// the component γᵏ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeRecord {
    pub q: u64,
    pub residue_class: u32,
    pub trace: i64,
    pub a1: f64,
}

fn validate_curve(q: u64, m: u32) -> Result<(), SweepError> {
    if m < 3 || m % 2 == 0 {
        return Err(SweepError::InvalidExponent(m));
    }
    if !arith::is_prime(q) {
        return Err(SweepError::NotPrime(q));
    }
    if q == 2 || u64::from(m) % q == 0 {
        return Err(SweepError::BadReduction { q, m });
    }
    Ok(())
}

/// Trace of Frobenius t = q + 1 − #C(F_q) for y² = x^m − 1, computed from
/// the folded character sum. The scratch buffer holds the quadratic
/// residue table and is reused across calls.
fn curve_trace_with(q: u64, m: u32, squares: &mut Vec<bool>) -> Result<i64, SweepError> {
    validate_curve(q, m)?;
    let qs = q as usize;
    squares.clear();
    squares.resize(qs, false);
    for x in 1..=(q - 1) / 2 {
        squares[((x * x) % q) as usize] = true;
    }
    // χ(v) with χ(0) = 0.
    let chi = |v: u64| -> i64 {
        if v == 0 {
            0
        } else if squares[v as usize] {
            1
        } else {
            -1
        }
    };

    let e = gcd(u64::from(m), q - 1);
    let root = arith::primitive_root_mod_prime(q);
    let step = arith::pow_mod(root, e, q);
    let mut sum = chi(q - 1);
    let mut u = 1u64;
    for _ in 0..(q - 1) / e {
        sum += (e as i64) * chi((u + q - 1) % q);
        u = arith::mul_mod(u, step, q);
    }
    let trace = -sum;

    // Weil bound: |t| ≤ 2g√q with 2g = m − 1.
    let two_g = u64::from(m) - 1;
    assert!(
        (trace * trace) as u64 <= two_g * two_g * q,
        "trace {trace} violates the Weil bound for q={q}, m={m}"
    );
    Ok(trace)
}

pub fn curve_trace(q: u64, m: u32) -> Result<i64, SweepError> {
    curve_trace_with(q, m, &mut Vec::new())
}

/// Normalized trace a₁ = t/√q.
pub fn curve_a1(q: u64, m: u32) -> Result<f64, SweepError> {
    Ok(curve_trace(q, m)? as f64 / (q as f64).sqrt())
}

/// Independent point count by direct enumeration: tally y² values, then
/// accumulate solution counts per x. Quadratic-time in q; oracle use only.
pub fn brute_force_trace(q: u64, m: u32) -> Result<i64, SweepError> {
    validate_curve(q, m)?;
    let mut square_counts = vec![0u64; q as usize];
    for y in 0..q {
        square_counts[((y * y) % q) as usize] += 1;
    }
    let mut affine = 0u64;
    for x in 0..q {
        let v = (arith::pow_mod(x, u64::from(m), q) + q - 1) % q;
        affine += square_counts[v as usize];
    }
    // One point at infinity since m is odd.
    Ok(q as i64 - affine as i64)
}

pub const DEFAULT_SWEEP_CHUNK: usize = 4096;
const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub p: u32,
    pub bound: u64,
    pub generator: u32,
    /// Worker threads; 0 uses the global thread pool.
    pub jobs: usize,
    /// Primes per flush-and-checkpoint batch.
    pub chunk: usize,
    /// Persistence directory; None keeps the sweep in memory.
    pub dir: Option<PathBuf>,
    pub resume: bool,
}

impl SweepConfig {
    pub fn new(p: u32, bound: u64) -> Result<Self, SweepError> {
        if p < 3 || p % 2 == 0 || !arith::is_prime(u64::from(p)) {
            return Err(SweepError::NotAnOddPrime(p));
        }
        Ok(Self {
            p,
            bound,
            generator: arith::primitive_root_mod_p2(p),
            jobs: 0,
            chunk: DEFAULT_SWEEP_CHUNK,
            dir: None,
            resume: false,
        })
    }
}

/// All records of a completed sweep, in increasing q.
#[derive(Debug, Clone)]
pub struct SweepState {
    p: u32,
    generator: u32,
    bound: u64,
    records: Vec<PrimeRecord>,
}

impl SweepState {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.p * self.p
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Number of components, φ(p²).
    pub fn class_count(&self) -> u32 {
        self.p * (self.p - 1)
    }

    pub fn records(&self) -> &[PrimeRecord] {
        &self.records
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    p: u32,
    generator: u32,
    next_q: u64,
    records_bytes: u64,
}

fn records_path(dir: &Path, p: u32, generator: u32) -> PathBuf {
    dir.join(format!("p{p}-g{generator}.records"))
}

fn checkpoint_path(dir: &Path, p: u32, generator: u32) -> PathBuf {
    dir.join(format!("p{p}-g{generator}.checkpoint.json"))
}

fn header(p: u32, generator: u32) -> String {
    let m = p * p;
    format!(
        "# curve-point-count sweep v{CHECKPOINT_VERSION}\n\
         # p={p} m={m} generator={generator}\n\
         # fields: q residue_class trace a1\n\
         # trace = q + 1 - #C(F_q) for y^2 = x^m - 1; a1 = trace / sqrt(q)\n\
         # residue_class k satisfies q = generator^k (mod p^2); trace = 0 when q != 1 (mod p)\n"
    )
}

fn record_line(record: &PrimeRecord) -> String {
    // 12 significant digits for a1, reproducible across runs.
    format!(
        "{} {} {} {:.11e}\n",
        record.q, record.residue_class, record.trace, record.a1
    )
}

fn parse_records(text: &str) -> Result<Vec<PrimeRecord>, SweepError> {
    let mut records = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(SweepError::Parse(format!("expected 4 fields: {line:?}")));
        }
        let q: u64 = fields[0]
            .parse()
            .map_err(|_| SweepError::Parse(format!("bad q in {line:?}")))?;
        let residue_class: u32 = fields[1]
            .parse()
            .map_err(|_| SweepError::Parse(format!("bad class in {line:?}")))?;
        let trace: i64 = fields[2]
            .parse()
            .map_err(|_| SweepError::Parse(format!("bad trace in {line:?}")))?;
        // a1 is derived data; recompute instead of trusting the rounding.
        records.push(PrimeRecord {
            q,
            residue_class,
            trace,
            a1: trace as f64 / (q as f64).sqrt(),
        });
    }
    Ok(records)
}

fn write_checkpoint(path: &Path, checkpoint: &Checkpoint) -> Result<(), SweepError> {
    let tmp = path.with_extension("json.tmp");
    fs::write(
        &tmp,
        serde_json::to_vec_pretty(checkpoint).expect("serializable"),
    )?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn record_for(
    q: u64,
    p: u32,
    dlog: &[u32],
    scratch: &mut Vec<bool>,
) -> Result<PrimeRecord, SweepError> {
    let m = p * p;
    let residue_class = dlog[(q % u64::from(m)) as usize];
    debug_assert_ne!(residue_class, u32::MAX, "q={q} is not a unit mod {m}");
    let trace = if q % u64::from(p) == 1 {
        curve_trace_with(q, m, scratch)?
    } else {
        0
    };
    Ok(PrimeRecord {
        q,
        residue_class,
        trace,
        a1: trace as f64 / (q as f64).sqrt(),
    })
}

/// Run (or extend) a sweep over all good odd primes up to the bound.
///
/// With a persistence directory the record file gains a chunk of lines
/// and a fresh checkpoint after every batch, so an interrupted sweep
/// resumes at the last checkpoint and the final file is byte-identical to
/// a single uninterrupted run regardless of chunking, thread count, or
/// the number of resume cycles.
pub fn sweep(config: &SweepConfig) -> Result<SweepState, SweepError> {
    if config.p < 3 || config.p % 2 == 0 || !arith::is_prime(u64::from(config.p)) {
        return Err(SweepError::NotAnOddPrime(config.p));
    }
    if !arith::is_generator_mod_p2(config.p, config.generator) {
        return Err(SweepError::NotAGenerator {
            a: config.generator,
            p: config.p,
        });
    }
    if config.chunk == 0 {
        return Err(SweepError::InvalidConfig(
            "chunk size must be positive".into(),
        ));
    }
    if config.resume && config.dir.is_none() {
        return Err(SweepError::InvalidConfig(
            "resume requires a persistence directory".into(),
        ));
    }

    let p = config.p;
    let generator = config.generator;
    let dlog = arith::dlog_table_mod_p2(p, generator);

    let mut records: Vec<PrimeRecord> = Vec::new();
    let mut next_q = 0u64;
    let mut file = None;

    if let Some(dir) = &config.dir {
        fs::create_dir_all(dir)?;
        let rec_path = records_path(dir, p, generator);
        let ckpt_path = checkpoint_path(dir, p, generator);
        let mut resumed_handle = None;
        if config.resume && ckpt_path.exists() {
            let checkpoint: Checkpoint = serde_json::from_slice(&fs::read(&ckpt_path)?)
                .map_err(|e| SweepError::Parse(format!("checkpoint: {e}")))?;
            if checkpoint.version != CHECKPOINT_VERSION {
                return Err(SweepError::ConfigMismatch(format!(
                    "checkpoint version {} (expected {CHECKPOINT_VERSION})",
                    checkpoint.version
                )));
            }
            if checkpoint.p != p || checkpoint.generator != generator {
                return Err(SweepError::ConfigMismatch(format!(
                    "checkpoint is for p={} generator={}",
                    checkpoint.p, checkpoint.generator
                )));
            }
            let handle = fs::OpenOptions::new()
                .read(true)
                .write(true)
                .open(&rec_path)?;
            // Drop any lines written after the checkpoint was taken.
            handle.set_len(checkpoint.records_bytes)?;
            let mut handle = handle;
            handle.seek(std::io::SeekFrom::End(0))?;
            let text = fs::read_to_string(&rec_path)?;
            records = parse_records(&text)?;
            next_q = checkpoint.next_q;
            resumed_handle = Some(handle);
        }
        let handle = match resumed_handle {
            Some(handle) => handle,
            None => {
                let mut handle = fs::OpenOptions::new()
                    .read(true)
                    .write(true)
                    .create(true)
                    .truncate(true)
                    .open(&rec_path)?;
                handle.write_all(header(p, generator).as_bytes())?;
                let bytes = handle.stream_position()?;
                write_checkpoint(
                    &ckpt_path,
                    &Checkpoint {
                        version: CHECKPOINT_VERSION,
                        p,
                        generator,
                        next_q: 0,
                        records_bytes: bytes,
                    },
                )?;
                handle
            }
        };
        file = Some((handle, ckpt_path));
    }

    let todo: Vec<u64> = arith::primes_up_to(config.bound)
        .into_iter()
        .filter(|&q| q != 2 && q != u64::from(p) && q >= next_q)
        .collect();

    let pool = match config.jobs {
        0 => None,
        jobs => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| SweepError::InvalidConfig(e.to_string()))?,
        ),
    };

    for chunk in todo.chunks(config.chunk) {
        let compute = || -> Result<Vec<PrimeRecord>, SweepError> {
            chunk
                .par_iter()
                .map_init(Vec::new, |scratch, &q| record_for(q, p, &dlog, scratch))
                .collect()
        };
        let batch = match &pool {
            Some(pool) => pool.install(compute),
            None => compute(),
        }?;

        if let Some((handle, ckpt_path)) = &mut file {
            let mut buffer = String::new();
            for record in &batch {
                buffer.push_str(&record_line(record));
            }
            handle.write_all(buffer.as_bytes())?;
            handle.flush()?;
            let bytes = handle.stream_position()?;
            write_checkpoint(
                ckpt_path,
                &Checkpoint {
                    version: CHECKPOINT_VERSION,
                    p,
                    generator,
                    next_q: chunk.last().unwrap() + 1,
                    records_bytes: bytes,
                },
            )?;
        }
        records.extend(batch);
    }

    // A resumed sweep may carry records beyond a smaller requested bound.
    records.retain(|r| r.q <= config.bound);
    Ok(SweepState {
        p,
        generator,
        bound: config.bound,
        records,
    })
}

/// Empirical moments of a₁ across the sweep: the overall average of a₁ⁿ
/// over every record including the exact zeros, plus the same average
/// restricted to each residue class.
#[derive(Debug, Clone, Serialize)]
pub struct NumericalMoments {
    pub n_max: u32,
    pub total_records: u64,
    /// Mean of a₁ⁿ over all records, n = 1..=n_max.
    pub overall: Vec<f64>,
    pub per_class: Vec<PerClassMoments>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerClassMoments {
    pub class: u32,
    pub count: u64,
    pub moments: Vec<f64>,
}

pub fn numerical_moments(state: &SweepState, n_max: u32) -> NumericalMoments {
    let classes = state.class_count() as usize;
    let mut overall = vec![0.0f64; n_max as usize];
    let mut per_class: Vec<(u64, Vec<f64>)> = vec![(0, vec![0.0; n_max as usize]); classes];
    for record in state.records() {
        let slot = &mut per_class[record.residue_class as usize];
        slot.0 += 1;
        let mut power = 1.0;
        for (sum, class_sum) in overall.iter_mut().zip(slot.1.iter_mut()) {
            power *= record.a1;
            *sum += power;
            *class_sum += power;
        }
    }
    let total = state.records().len() as u64;
    if total > 0 {
        for value in overall.iter_mut() {
            *value /= total as f64;
        }
    }
    let per_class = per_class
        .into_iter()
        .enumerate()
        .map(|(class, (count, mut sums))| {
            if count > 0 {
                for value in sums.iter_mut() {
                    *value /= count as f64;
                }
            }
            PerClassMoments {
                class: class as u32,
                count,
                moments: sums,
            }
        })
        .collect();
    NumericalMoments {
        n_max,
        total_records: total,
        overall,
        per_class,
    }
}

/// Histogram of a₁ over [−2g, 2g]. Records with trace exactly zero form a
/// separate spike (`zero_count`) and are left out of the bins; bin i
/// covers [lo + i·w, lo + (i+1)·w) with the top edge closed.
#[derive(Debug, Clone, Serialize)]
pub struct TraceHistogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub zero_count: u64,
    pub total_records: u64,
}

pub fn histogram(state: &SweepState, bins: u32) -> TraceHistogram {
    assert!(bins >= 1, "histogram needs at least one bin");
    let two_g = f64::from(state.m() - 1);
    let lo = -two_g;
    let hi = two_g;
    let width = (hi - lo) / f64::from(bins);
    let mut counts = vec![0u64; bins as usize];
    let mut zero_count = 0u64;
    for record in state.records() {
        if record.trace == 0 {
            zero_count += 1;
            continue;
        }
        let idx = (((record.a1 - lo) / width) as usize).min(bins as usize - 1);
        counts[idx] += 1;
    }
    TraceHistogram {
        lo,
        hi,
        counts,
        zero_count,
        total_records: state.records().len() as u64,
    }
}

/// Group records by residue class; classes with no records are omitted.
pub fn records_by_class(state: &SweepState) -> HashMap<u32, Vec<&PrimeRecord>> {
    let mut by_class: HashMap<u32, Vec<&PrimeRecord>> = HashMap::new();
    for record in state.records() {
        by_class
            .entry(record.residue_class)
            .or_default()
            .push(record);
    }
    by_class
}
