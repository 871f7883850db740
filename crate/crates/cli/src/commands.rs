use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use qrx_core::bench::{bench_point, emit_csv, write_csv, BenchConfig, BenchSource};
use qrx_core::manifest::sidecar_path;
use qrx_core::sanity::{monobit, runs, RECOMMENDED_MIN_BITS};
use qrx_core::source::{bernoulli_bits, write_source};
use qrx_core::{
    block_extract, circulant_primes, file_bit_len, prepare_mask, read_bits, write_bits, BitReader, BitVector,
    ExtractorParams, Family, Manifest, Mask, Mode, SeedBundle, SoundnessLedger, StreamSession,
};
use serde_json::json;

use crate::{BenchArgs, EntropyArgs, ExtractArgs, GenSourceArgs, InstanceArgs, MaskArgs, SanityArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(qrx_core::Error),
    Sanity(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Sanity(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Data(e) => write!(f, "{e}"),
            CliError::Sanity(msg) => write!(f, "sanity check failed: {msg}"),
        }
    }
}

impl From<qrx_core::Error> for CliError {
    fn from(e: qrx_core::Error) -> Self {
        CliError::Data(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult = Result<(), CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Exact bit length of a data file: the manifest's if one exists, else the
/// byte length times eight.
fn input_bits(path: &Path) -> Result<u64, CliError> {
    if sidecar_path(path).exists() {
        return Ok(Manifest::read_for(path)?.bit_length);
    }
    Ok(file_bit_len(path)?)
}

fn read_exact_bits(path: &Path, offset: u64, count: usize) -> Result<BitVector, CliError> {
    let available = input_bits(path)?;
    if offset + count as u64 > available {
        return Err(qrx_core::Error::ShortRead {
            path: path.to_path_buf(),
            needed: offset + count as u64,
            available,
        }
        .into());
    }
    Ok(read_bits(path, offset, count as u64)?)
}

fn min_entropy(entropy: &EntropyArgs, raw_bits: u64) -> Result<u64, CliError> {
    match (entropy.alpha, entropy.k) {
        (Some(alpha), None) => {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(usage(format!("--alpha must lie in (0, 1], got {alpha}")));
            }
            Ok((alpha * raw_bits as f64).round() as u64)
        }
        (None, Some(k)) => Ok(k),
        _ => Err(usage("exactly one of --alpha and --k is required")),
    }
}

/// One configured instance and its raw-data geometry.
struct Instance {
    params: ExtractorParams,
    raw_bits: usize,
    log2_eps: i64,
}

impl Instance {
    fn resolve(args: &InstanceArgs, mode: Mode, default_raw_bits: Option<u64>) -> Result<Self, CliError> {
        let raw_bits = args
            .n
            .or(default_raw_bits)
            .ok_or_else(|| usage("--n is required when there is no raw file to size it"))?;
        if raw_bits == 0 {
            return Err(usage("--n must be positive"));
        }
        let k = min_entropy(&args.entropy, raw_bits)?;
        let params = ExtractorParams::for_raw_len(args.family, mode, raw_bits as usize, k, args.log2_eps)?;
        Ok(Self {
            params,
            raw_bits: raw_bits as usize,
            log2_eps: args.log2_eps,
        })
    }

    fn padding(&self) -> usize {
        self.params.raw_len() - self.raw_bits
    }

    fn manifest(&self, bit_length: u64, description: &str) -> Manifest {
        let p = &self.params;
        let lens = p.seed_lengths();
        Manifest::new(bit_length, description)
            .with("family", p.family)
            .with("mode", p.mode)
            .with("n", p.n)
            .with("raw_bits", self.raw_bits)
            .with("padding_bits", self.padding())
            .with("k", p.k)
            .with("m", p.m)
            .with("log2_eps", self.log2_eps)
            .with("soundness_log2_eps", p.soundness())
            .with("seed_lengths", json!({ "r": lens.r, "y": lens.y, "total": lens.total() }))
    }
}

fn ledger_json(ledger: &SoundnessLedger) -> serde_json::Value {
    json!({
        "base_log2_eps": ledger.base_log2_eps,
        "reuse_count": ledger.reuse_count,
        "multiplier": ledger.multiplier(),
        "total_log2_eps": ledger.total_log2_eps(),
    })
}

fn read_padded_block(path: &Path, block: u64, inst: &Instance) -> Result<BitVector, CliError> {
    let mut x = read_exact_bits(path, block * inst.raw_bits as u64, inst.raw_bits)?;
    x.pad_zeros(inst.padding());
    Ok(x)
}

pub fn extract(args: ExtractArgs) -> CliResult {
    if args.blocks == 0 {
        return Err(usage("--blocks must be at least 1"));
    }
    if args.chunk == 0 {
        return Err(usage("--chunk must be positive"));
    }
    let available = input_bits(&args.raw)?;
    let inst = Instance::resolve(&args.instance, args.mode, Some(available / args.blocks))?;
    let needed = inst.raw_bits as u64 * args.blocks;
    if available < needed {
        return Err(qrx_core::Error::ShortRead {
            path: args.raw.clone(),
            needed,
            available,
        }
        .into());
    }
    match args.mode {
        Mode::Block => extract_block(&args, &inst),
        Mode::Stream => extract_stream(&args, &inst),
    }
}

fn extract_block(args: &ExtractArgs, inst: &Instance) -> CliResult {
    if args.mask.is_some() || args.seed_r.is_some() || args.next_seed_r.is_some() {
        return Err(usage("--mask, --seed-r and --next-seed-r apply to stream mode only"));
    }
    let seed_y = args.seed_y.as_deref().ok_or_else(|| usage("block mode needs --seed-y"))?;
    let p = &inst.params;
    let y = read_exact_bits(seed_y, 0, p.seed_lengths().y)?;
    let mut out = BitVector::new();
    for b in 0..args.blocks {
        let x = read_padded_block(&args.raw, b, inst)?;
        out.append(&block_extract(p, &x, &y)?);
    }
    let mut ledger = SoundnessLedger::new(p.soundness());
    ledger.reuse_count = args.blocks - 1;
    write_bits(&args.out, &out)?;
    let mut manifest = inst.manifest(out.len() as u64, "extracted output");
    manifest.insert("blocks", args.blocks);
    manifest.insert("ledger", ledger_json(&ledger));
    manifest.write_for(&args.out)?;
    println!("wrote {} bits to {}", out.len(), args.out.display());
    Ok(())
}

fn load_mask(path: &Path, p: &ExtractorParams) -> Result<Mask, CliError> {
    if sidecar_path(path).exists() {
        let m = Manifest::read_for(path)?;
        let field = |k: &str| m.get(k).cloned().unwrap_or(serde_json::Value::Null);
        if field("family") != json!(p.family) || field("n") != json!(p.n) || field("m") != json!(p.m) {
            return Err(qrx_core::Error::InvalidParams(format!(
                "mask {} was made for family {}, n {}, m {}; this run needs {}, {}, {}",
                path.display(),
                field("family"),
                field("n"),
                field("m"),
                p.family,
                p.n,
                p.m
            ))
            .into());
        }
    }
    let len = p.mask_len();
    let available = input_bits(path)?;
    // without a manifest the length is only known up to byte padding
    if !(len as u64..len as u64 + 8).contains(&available) {
        return Err(qrx_core::Error::LengthMismatch {
            expected: len,
            actual: available as usize,
        }
        .into());
    }
    Ok(Mask::from_bits(read_bits(path, 0, len as u64)?, p.family, p.n, p.m)?)
}

fn extract_stream(args: &ExtractArgs, inst: &Instance) -> CliResult {
    let p = inst.params;
    if args.blocks > 1 && p.family == Family::Circulant && !args.allow_circulant_chain {
        return Err(usage(
            "circulant seed-reuse chaining is disabled by default; pass --allow-circulant-chain to enable it",
        ));
    }
    let lens = p.seed_lengths();
    let y = match &args.seed_y {
        Some(path) => Some(read_exact_bits(path, 0, lens.y)?),
        None => None,
    };
    let mut session = match (&args.mask, &args.seed_r) {
        (Some(_), Some(_)) => return Err(usage("give either --mask or --seed-r, not both")),
        (Some(mask), None) => {
            if args.blocks > 1 && y.is_none() {
                return Err(usage("chaining blocks needs --seed-y"));
            }
            let mask = load_mask(mask, &p)?;
            StreamSession::with_mask(p, mask, y.unwrap_or_default())?
        }
        (None, Some(seed_r)) => {
            let y = y.ok_or_else(|| usage("stream mode needs --seed-y"))?;
            let r = read_exact_bits(seed_r, 0, lens.r)?;
            StreamSession::prepare(p, SeedBundle::new(r, y))?
        }
        (None, None) => return Err(usage("stream mode needs --seed-r and --seed-y, or --mask")),
    };

    let chunk_bits = args.chunk.saturating_mul(8);
    let mut reader = BitReader::new(BufReader::with_capacity(args.chunk.min(1 << 24), File::open(&args.raw)?));
    let mut out = BitVector::new();
    let mut block = 0;
    loop {
        let mut left = inst.raw_bits;
        while left > 0 {
            let take = chunk_bits.min(left);
            session.process_chunk(&reader.read(take)?)?;
            left -= take;
        }
        if inst.padding() > 0 {
            session.process_chunk(&BitVector::zeros(inst.padding()))?;
        }
        let done = session.finalize()?;
        out.append(&done.output);
        block += 1;
        if block == args.blocks {
            write_bits(&args.out, &out)?;
            if let Some(path) = &args.next_seed_r {
                write_bits(path, &done.next_r)?;
                Manifest::new(done.next_r.len() as u64, "seed harvested for the next stream block")
                    .with("family", p.family)
                    .with("n", p.n)
                    .with("m", p.m)
                    .write_for(path)?;
            }
            let mut manifest = inst.manifest(out.len() as u64, "extracted output");
            manifest.insert("blocks", args.blocks);
            manifest.insert("chunk_bytes", args.chunk);
            manifest.insert("ledger", ledger_json(&done.ledger));
            if let Some(mask) = &args.mask {
                manifest.insert("mask", mask.display().to_string());
            }
            manifest.write_for(&args.out)?;
            println!("wrote {} bits to {}", out.len(), args.out.display());
            return Ok(());
        }
        session = StreamSession::chain(&done, p)?;
    }
}

pub fn mask(args: MaskArgs) -> CliResult {
    let inst = Instance::resolve(&args.instance, Mode::Stream, None)?;
    let p = &inst.params;
    let lens = p.seed_lengths();
    let r = read_exact_bits(&args.seed_r, 0, lens.r)?;
    let y = read_exact_bits(&args.seed_y, 0, lens.y)?;
    let mask = prepare_mask(p, &SeedBundle::new(r, y))?;
    write_bits(&args.out, mask.bits())?;
    let mut manifest = inst.manifest(mask.len() as u64, "stream-mode mask");
    manifest.insert("mask_len", mask.len());
    manifest.write_for(&args.out)?;
    println!("wrote {}-bit mask to {}", mask.len(), args.out.display());
    Ok(())
}

const DEFAULT_BENCH_GRID: [usize; 3] = [1 << 16, 1 << 18, 1 << 20];

pub fn bench(args: BenchArgs) -> CliResult {
    let families = if args.family.is_empty() { Family::ALL.to_vec() } else { args.family.clone() };
    let modes = if args.mode.is_empty() { Mode::ALL.to_vec() } else { args.mode.clone() };
    let grid = if args.n.is_empty() { DEFAULT_BENCH_GRID.to_vec() } else { args.n.clone() };
    if args.reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    let max_n = *grid.iter().max().expect("nonempty grid");
    let source = match &args.raw {
        Some(path) => BenchSource::File(path.clone()),
        None => {
            eprintln!("qrx: no --raw given; timing on in-memory synthetic bits (excludes file I/O)");
            BenchSource::Memory(bernoulli_bits(max_n, 0.5, args.rng_seed)?)
        }
    };
    let mut cfg = BenchConfig::new(source);
    cfg.warmups = args.warmups;
    cfg.reps = args.reps;
    cfg.log2_eps = args.log2_eps;
    cfg.rng_seed = args.rng_seed;
    let mut records = Vec::new();
    for &family in &families {
        for &mode in &modes {
            for &n in &grid {
                for &alpha in &args.alpha {
                    let rec = bench_point(&cfg, family, mode, n, alpha)?;
                    eprintln!("{family} {mode} n={n} alpha={alpha}: {:.6}s", rec.t_total_s);
                    records.push(rec);
                }
            }
        }
    }
    match &args.csv {
        Some(path) => emit_csv(&records, path)?,
        None => write_csv(&records, BufWriter::new(std::io::stdout().lock()))?,
    }
    Ok(())
}

pub fn primes(lo: u64, hi: u64) -> CliResult {
    if lo > hi {
        return Err(usage(format!("empty range {lo}..={hi}")));
    }
    for p in circulant_primes(lo, hi) {
        println!("{p}");
    }
    Ok(())
}

pub fn gen_source(args: GenSourceArgs) -> CliResult {
    let manifest = write_source(&args.out, args.bits, args.bias, args.rng_seed)?;
    let rate = manifest.get("min_entropy_rate").and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
    println!(
        "wrote {} synthetic bits (p = {}, min-entropy rate {rate:.4}) to {}; NOT cryptographic",
        args.bits,
        args.bias,
        args.out.display()
    );
    Ok(())
}

pub fn sanity(args: SanityArgs) -> CliResult {
    let bits = input_bits(&args.path)?;
    if bits < RECOMMENDED_MIN_BITS as u64 {
        eprintln!("qrx: warning: {bits} bits is below the recommended {RECOMMENDED_MIN_BITS}");
    }
    let v = read_bits(&args.path, 0, bits)?;
    let f = monobit(&v);
    let r = runs(&v);
    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
    println!("monobit p = {:.6} {}", f.p_value, verdict(f.passed(args.significance)));
    println!("runs    p = {:.6} {}", r.p_value, verdict(r.passed(args.significance)));
    if f.passed(args.significance) && r.passed(args.significance) {
        Ok(())
    } else {
        Err(CliError::Sanity(format!("a p-value fell below {}", args.significance)))
    }
}
