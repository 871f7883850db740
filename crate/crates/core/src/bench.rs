//! Timing harness: untimed warm-ups, then median and population standard
//! deviation over timed repetitions on a monotonic clock.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bits::{read_bits, BitVector};
use crate::error::{Error, Result};
use crate::families::{block_extract, prepare_mask, stream_finalize, Mask};
use crate::params::{kernel_length, predicted_ops, ExtractorParams, Family, Mode, SeedBundle};
use crate::source::uniform_bits;

pub const DEFAULT_WARMUPS: usize = 5;
pub const DEFAULT_REPS: usize = 100;

/// A monotonic time source in seconds.
pub trait Clock {
    fn now(&self) -> f64;
}

#[derive(Clone, Copy, Debug)]
pub struct MonotonicClock {
    origin: Instant,
}

impl MonotonicClock {
    pub fn new() -> Self {
        Self { origin: Instant::now() }
    }
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for MonotonicClock {
    fn now(&self) -> f64 {
        self.origin.elapsed().as_secs_f64()
    }
}

/// Replays scripted timestamps, so each timed region measures a chosen
/// duration.
#[derive(Debug, Default)]
pub struct ScriptedClock {
    ticks: RefCell<VecDeque<f64>>,
}

impl ScriptedClock {
    /// Consecutive timed regions will measure `durations` in order.
    pub fn from_durations(durations: &[f64]) -> Self {
        let mut ticks = VecDeque::with_capacity(2 * durations.len());
        let mut t = 0.0;
        for &d in durations {
            ticks.push_back(t);
            ticks.push_back(t + d);
            t += d + 1.0;
        }
        Self {
            ticks: RefCell::new(ticks),
        }
    }
}

impl Clock for ScriptedClock {
    fn now(&self) -> f64 {
        self.ticks.borrow_mut().pop_front().expect("scripted clock exhausted")
    }
}

/// Summary of the timed samples of one region.
#[derive(Clone, Debug, PartialEq)]
pub struct Timing {
    pub samples: Vec<f64>,
    pub median: f64,
    pub std: f64,
}

impl Timing {
    pub fn from_samples(samples: Vec<f64>) -> Self {
        let median = median(&samples);
        let std = population_std(&samples);
        Self { samples, median, std }
    }
}

pub fn median(samples: &[f64]) -> f64 {
    assert!(!samples.is_empty(), "median of no samples");
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let mid = s.len() / 2;
    if s.len() % 2 == 1 {
        s[mid]
    } else {
        (s[mid - 1] + s[mid]) / 2.0
    }
}

pub fn population_std(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Runs `task` `warmups` times untimed, then `reps` times timed.
pub fn run_bench<F: FnMut() -> Result<()>>(task: F, warmups: usize, reps: usize) -> Result<Timing> {
    run_bench_with_clock(&MonotonicClock::new(), task, warmups, reps)
}

pub fn run_bench_with_clock<C, F>(clock: &C, mut task: F, warmups: usize, reps: usize) -> Result<Timing>
where
    C: Clock,
    F: FnMut() -> Result<()>,
{
    let mut phases: [&mut dyn FnMut() -> Result<()>; 1] = [&mut task];
    let mut timings = run_phases(clock, &mut phases, warmups, reps)?;
    Ok(timings.phases.pop().expect("one phase"))
}

/// Timings of a task split into sequential phases.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasedTiming {
    pub phases: Vec<Timing>,
    /// Per-repetition sums over all phases.
    pub total: Timing,
}

/// Like [`run_bench_with_clock`], timing each phase separately. Phases run in
/// order within every repetition.
pub fn run_phases<C: Clock>(
    clock: &C,
    phases: &mut [&mut dyn FnMut() -> Result<()>],
    warmups: usize,
    reps: usize,
) -> Result<PhasedTiming> {
    if reps == 0 {
        return Err(Error::InvalidParams("reps must be at least 1".into()));
    }
    if phases.is_empty() {
        return Err(Error::InvalidParams("no benchmark phases".into()));
    }
    let fail = |completed: usize, e: Error| Error::BenchTask {
        completed,
        source: Box::new(e),
    };
    for run in 0..warmups {
        for phase in phases.iter_mut() {
            phase().map_err(|e| fail(run, e))?;
        }
    }
    let mut samples = vec![Vec::with_capacity(reps); phases.len()];
    for rep in 0..reps {
        for (phase, out) in phases.iter_mut().zip(samples.iter_mut()) {
            let start = clock.now();
            phase().map_err(|e| fail(warmups + rep, e))?;
            out.push(clock.now() - start);
        }
    }
    let totals = (0..reps).map(|i| samples.iter().map(|s| s[i]).sum()).collect();
    Ok(PhasedTiming {
        phases: samples.into_iter().map(Timing::from_samples).collect(),
        total: Timing::from_samples(totals),
    })
}

/// Where benchmark raw data comes from.
#[derive(Clone, Debug)]
pub enum BenchSource {
    /// Headerless bit file, read from disk inside the timed region.
    File(PathBuf),
    /// Pre-loaded bits, for tests that should not touch the disk.
    Memory(BitVector),
}

impl BenchSource {
    fn read(&self, bits: usize) -> Result<BitVector> {
        match self {
            BenchSource::File(path) => read_bits(path, 0, bits as u64),
            BenchSource::Memory(v) => {
                if v.len() < bits {
                    return Err(Error::ShortRead {
                        path: Path::new("<memory>").to_path_buf(),
                        needed: bits as u64,
                        available: v.len() as u64,
                    });
                }
                v.range(0, bits)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub source: BenchSource,
    pub warmups: usize,
    pub reps: usize,
    pub log2_eps: i64,
    /// Seeds the (untimed) benchmark seed generation.
    pub rng_seed: u64,
}

impl BenchConfig {
    pub fn new(source: BenchSource) -> Self {
        Self {
            source,
            warmups: DEFAULT_WARMUPS,
            reps: DEFAULT_REPS,
            log2_eps: -64,
            rng_seed: 0,
        }
    }
}

/// One measured point. Times are medians in seconds; block rows carry only
/// `t_total_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub family: Family,
    pub mode: Mode,
    /// Raw input length in bits.
    pub n: usize,
    pub alpha: f64,
    pub m: usize,
    pub t_mask_s: Option<f64>,
    pub t_xor_s: Option<f64>,
    pub t_total_s: f64,
    pub std_s: f64,
    pub kernel_len: usize,
    pub predicted_ops: i64,
}

pub const CSV_COLUMNS: [&str; 11] = [
    "family",
    "mode",
    "n",
    "alpha",
    "m",
    "t_mask_s",
    "t_xor_s",
    "t_total_s",
    "std_s",
    "kernel_len",
    "predicted_ops",
];

/// Extractor parameters of a benchmark point with `k = round(alpha * n)`.
pub fn bench_params(family: Family, mode: Mode, n: usize, alpha: f64, log2_eps: i64) -> Result<ExtractorParams> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParams(format!("entropy rate must lie in (0, 1], got {alpha}")));
    }
    let k = (alpha * n as f64).round() as u64;
    ExtractorParams::for_raw_len(family, mode, n, k, log2_eps)
}

fn seeds_for(params: &ExtractorParams, rng_seed: u64) -> SeedBundle {
    let lens = params.seed_lengths();
    let bits = uniform_bits(lens.total(), rng_seed);
    let r = bits.range(0, lens.r).expect("in range");
    let y = bits.range(lens.r, lens.y).expect("in range");
    SeedBundle::new(r, y)
}

fn read_padded(source: &BenchSource, n: usize, params: &ExtractorParams) -> Result<BitVector> {
    let mut x = source.read(n)?;
    x.pad_zeros(params.raw_len() - n);
    Ok(x)
}

fn record(params: &ExtractorParams, n: usize, alpha: f64) -> Result<BenchRecord> {
    Ok(BenchRecord {
        family: params.family,
        mode: params.mode,
        n,
        alpha,
        m: params.m,
        t_mask_s: None,
        t_xor_s: None,
        t_total_s: 0.0,
        std_s: 0.0,
        kernel_len: kernel_length(params.family, params.mode, n, params.m),
        predicted_ops: predicted_ops(params.family, params.mode, n, params.m)?,
    })
}

/// Times reading `n` raw bits plus one block extraction.
pub fn bench_block(cfg: &BenchConfig, family: Family, n: usize, alpha: f64) -> Result<BenchRecord> {
    bench_block_with_clock(&MonotonicClock::new(), cfg, family, n, alpha)
}

pub fn bench_block_with_clock<C: Clock>(
    clock: &C,
    cfg: &BenchConfig,
    family: Family,
    n: usize,
    alpha: f64,
) -> Result<BenchRecord> {
    let params = bench_params(family, Mode::Block, n, alpha, cfg.log2_eps)?;
    let seeds = seeds_for(&params, cfg.rng_seed);
    let mut sink = 0usize;
    let timing = run_bench_with_clock(
        clock,
        || {
            let x = read_padded(&cfg.source, n, &params)?;
            sink ^= block_extract(&params, &x, &seeds.y)?.count_ones();
            Ok(())
        },
        cfg.warmups,
        cfg.reps,
    )?;
    std::hint::black_box(sink);
    let mut rec = record(&params, n, alpha)?;
    rec.t_total_s = timing.median;
    rec.std_s = timing.std;
    Ok(rec)
}

/// Times mask preparation (seeds already in memory) and then reading `n` raw
/// bits plus the XOR and truncation, separately.
pub fn bench_stream(cfg: &BenchConfig, family: Family, n: usize, alpha: f64) -> Result<BenchRecord> {
    bench_stream_with_clock(&MonotonicClock::new(), cfg, family, n, alpha)
}

pub fn bench_stream_with_clock<C: Clock>(
    clock: &C,
    cfg: &BenchConfig,
    family: Family,
    n: usize,
    alpha: f64,
) -> Result<BenchRecord> {
    let params = bench_params(family, Mode::Stream, n, alpha, cfg.log2_eps)?;
    let seeds = seeds_for(&params, cfg.rng_seed);
    let mask: RefCell<Option<Mask>> = RefCell::new(None);
    let mut sink = 0usize;
    let mut mask_phase = || {
        *mask.borrow_mut() = Some(prepare_mask(&params, &seeds)?);
        Ok(())
    };
    let mut xor_phase = || {
        let x = read_padded(&cfg.source, n, &params)?;
        let guard = mask.borrow();
        let w = guard.as_ref().expect("mask phase runs first");
        sink ^= stream_finalize(&x, w)?.count_ones();
        Ok(())
    };
    let mut phases: [&mut dyn FnMut() -> Result<()>; 2] = [&mut mask_phase, &mut xor_phase];
    let timing = run_phases(clock, &mut phases, cfg.warmups, cfg.reps)?;
    std::hint::black_box(sink);
    let mut rec = record(&params, n, alpha)?;
    let (t_mask, t_xor) = (timing.phases[0].median, timing.phases[1].median);
    rec.t_mask_s = Some(t_mask);
    rec.t_xor_s = Some(t_xor);
    rec.t_total_s = t_mask + t_xor;
    rec.std_s = timing.total.std;
    Ok(rec)
}

pub fn bench_point(cfg: &BenchConfig, family: Family, mode: Mode, n: usize, alpha: f64) -> Result<BenchRecord> {
    match mode {
        Mode::Block => bench_block(cfg, family, n, alpha),
        Mode::Stream => bench_stream(cfg, family, n, alpha),
    }
}

pub fn sort_records(records: &mut [BenchRecord]) {
    records.sort_by(|a, b| {
        (a.family, a.mode, a.n)
            .cmp(&(b.family, b.mode, b.n))
            .then(a.alpha.total_cmp(&b.alpha))
    });
}

/// Writes records sorted by `(family, mode, n, alpha)`.
pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], out: W) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut w = csv::Writer::from_writer(out);
    for r in &sorted {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(records: &[BenchRecord], path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    crate::bits::write_atomic(path, &buf)
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        return Err(Error::InvalidParams(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn parse_csv(path: &Path) -> Result<Vec<BenchRecord>> {
    read_csv(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::bernoulli_bits;

    fn quick_cfg(bits: usize) -> BenchConfig {
        let mut cfg = BenchConfig::new(BenchSource::Memory(bernoulli_bits(bits, 0.55, 3).unwrap()));
        cfg.warmups = 1;
        cfg.reps = 3;
        cfg
    }

    #[test]
    fn median_is_order_statistic() {
        let clock = ScriptedClock::from_durations(&[5.0, 1.0, 4.0, 2.0, 3.0]);
        let t = run_bench_with_clock(&clock, || Ok(()), 2, 5).unwrap();
        assert_eq!(t.median, 3.0);
        assert_eq!(t.samples, vec![5.0, 1.0, 4.0, 2.0, 3.0]);
        assert!((t.std - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn single_rep_has_zero_std() {
        let t = run_bench(|| Ok(()), 0, 1).unwrap();
        assert_eq!(t.samples.len(), 1);
        assert_eq!(t.median, t.samples[0]);
        assert_eq!(t.std, 0.0);
    }

    #[test]
    fn noop_is_near_zero_and_defaults_hold() {
        let t = run_bench(|| Ok(()), DEFAULT_WARMUPS, DEFAULT_REPS).unwrap();
        assert_eq!(t.samples.len(), 100);
        assert!(t.median < 1e-3);
        assert_eq!((DEFAULT_WARMUPS, DEFAULT_REPS), (5, 100));
    }

    #[test]
    fn warmups_are_untimed_and_failures_report_progress() {
        let mut calls = 0;
        let clock = ScriptedClock::from_durations(&[1.0; 4]);
        run_bench_with_clock(&clock, || {
            calls += 1;
            Ok(())
        }, 3, 4)
        .unwrap();
        assert_eq!(calls, 7);
        let mut left = 4;
        let err = run_bench(|| {
            left -= 1;
            if left == 0 {
                Err(Error::EmptyInput)
            } else {
                Ok(())
            }
        }, 2, 10)
        .unwrap_err();
        assert!(matches!(err, Error::BenchTask { completed: 3, .. }));
        assert!(run_bench(|| Ok(()), 0, 0).is_err());
    }

    #[test]
    fn stream_total_is_sum_of_phase_medians() {
        let clock = ScriptedClock::from_durations(&[1.0, 10.0, 2.0, 20.0, 3.0, 30.0]);
        let cfg = quick_cfg(4096);
        let mut cfg = cfg;
        cfg.warmups = 0;
        let rec = bench_stream_with_clock(&clock, &cfg, Family::Toeplitz, 4096, 0.8).unwrap();
        assert_eq!(rec.t_mask_s, Some(2.0));
        assert_eq!(rec.t_xor_s, Some(20.0));
        assert_eq!(rec.t_total_s, 22.0);
        assert!((rec.std_s - population_std(&[11.0, 22.0, 33.0])).abs() < 1e-12);
    }

    #[test]
    fn records_carry_kernel_lengths_and_predictions() {
        let n = 1 << 14;
        let cfg = quick_cfg(n);
        for family in Family::ALL {
            for mode in Mode::ALL {
                let rec = bench_point(&cfg, family, mode, n, 0.8).unwrap();
                let m = rec.m;
                assert_eq!(m, (0.8 * n as f64).round() as usize - 128);
                let expect = match (family, mode) {
                    (Family::Toeplitz, Mode::Block) => n + m - 1,
                    (Family::Toeplitz, Mode::Stream) => 2 * n - m - 1,
                    (Family::Circulant, _) => n + 1,
                    (Family::ModifiedToeplitz, _) => n - 1,
                };
                assert_eq!(rec.kernel_len, expect);
                assert_eq!(rec.predicted_ops, predicted_ops(family, mode, n, m).unwrap());
                assert_eq!(rec.t_mask_s.is_some(), mode == Mode::Stream);
            }
        }
        let stream = bench_point(&cfg, Family::Toeplitz, Mode::Stream, n, 0.8).unwrap();
        let block = bench_point(&cfg, Family::Toeplitz, Mode::Block, n, 0.8).unwrap();
        assert!(stream.kernel_len < block.kernel_len);
    }

    #[test]
    fn short_source_is_an_error() {
        let cfg = quick_cfg(100);
        match bench_block(&cfg, Family::Toeplitz, 1000, 0.5) {
            Err(Error::BenchTask { completed: 0, source }) => assert!(matches!(*source, Error::ShortRead { .. })),
            other => panic!("expected a wrapped short read, got {other:?}"),
        }
    }

    #[test]
    fn csv_round_trip_and_order() {
        let cfg = quick_cfg(2048);
        let mut recs = Vec::new();
        for alpha in [0.8, 0.5] {
            for family in [Family::ModifiedToeplitz, Family::Toeplitz] {
                recs.push(bench_point(&cfg, family, Mode::Stream, 2048, alpha).unwrap());
                recs.push(bench_point(&cfg, family, Mode::Block, 1024, alpha).unwrap());
            }
        }
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        assert!(text.lines().nth(1).unwrap().starts_with("toeplitz,block,1024,0.5,"));
        assert!(text.contains(",,"), "block rows leave mask and xor empty");
        let back = read_csv(buf.as_slice()).unwrap();
        let mut sorted = recs.clone();
        sort_records(&mut sorted);
        assert_eq!(back, sorted);
        assert!(write_csv(&[], Vec::new()).is_err());
    }
}
