mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qrx_core::{Family, Mode};

#[derive(Parser, Debug)]
#[command(name = "qrx", version, about = "Seeded randomness extraction with Toeplitz, circulant and modified Toeplitz hashing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract near-uniform bits from a raw bitstream.
    Extract(ExtractArgs),
    /// Precompute a stream-mode mask from seed files for later XOR-only
    /// extraction.
    Mask(MaskArgs),
    /// Time block and stream extraction and write CSV.
    Bench(BenchArgs),
    /// List primes in [LO, HI] that have 2 as a primitive root.
    Primes { lo: u64, hi: u64 },
    /// Write a synthetic, NON-cryptographic Bernoulli bit source.
    GenSource(GenSourceArgs),
    /// Run the monobit and runs tests on a bitstream.
    Sanity(SanityArgs),
}

#[derive(Args, Debug, Clone)]
#[group(id = "entropy", required = true, multiple = false)]
struct EntropyArgs {
    /// Min-entropy rate of the raw data, k = round(alpha * n).
    #[arg(long, group = "entropy")]
    alpha: Option<f64>,
    /// Min-entropy of one raw block, in bits.
    #[arg(long, group = "entropy")]
    k: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    #[arg(long)]
    family: Family,
    /// Raw bits per block (defaults to the length of the raw file).
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    entropy: EntropyArgs,
    /// Base-2 logarithm of the target soundness.
    #[arg(long, default_value_t = -64, allow_hyphen_values = true)]
    log2_eps: i64,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value = "block")]
    mode: Mode,
    #[arg(long)]
    raw: PathBuf,
    #[arg(long)]
    seed_r: Option<PathBuf>,
    #[arg(long)]
    seed_y: Option<PathBuf>,
    /// Precomputed mask from `qrx mask` (stream mode).
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Read size in bytes for stream mode.
    #[arg(long, default_value_t = 1 << 20)]
    chunk: usize,
    /// Number of consecutive raw blocks; stream blocks after the first reuse
    /// the harvested seed.
    #[arg(long, default_value_t = 1)]
    blocks: u64,
    /// Permit seed reuse chaining for the circulant family.
    #[arg(long)]
    allow_circulant_chain: bool,
    /// Where to write the seed harvested from the last stream block.
    #[arg(long)]
    next_seed_r: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MaskArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    seed_r: PathBuf,
    #[arg(long)]
    seed_y: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Families to time (default: all).
    #[arg(long, value_delimiter = ',')]
    family: Vec<Family>,
    /// Modes to time (default: both).
    #[arg(long, value_delimiter = ',')]
    mode: Vec<Mode>,
    /// Raw lengths in bits (default: 2^16, 2^18, 2^20).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.8])]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = -64, allow_hyphen_values = true)]
    log2_eps: i64,
    /// Raw data file, read inside the timed region. Without it, synthetic
    /// bits are generated in memory.
    #[arg(long)]
    raw: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 5)]
    warmups: usize,
    /// Output CSV (default: stdout).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

#[derive(Args, Debug)]
struct GenSourceArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    bits: u64,
    /// Probability of a one.
    #[arg(long, default_value_t = 0.5)]
    bias: f64,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

#[derive(Args, Debug)]
struct SanityArgs {
    /// Bitstream to test; its manifest supplies the exact bit length if present.
    path: PathBuf,
    #[arg(long, default_value_t = qrx_core::sanity::DEFAULT_ALPHA)]
    significance: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Extract(a) => commands::extract(a),
        Command::Mask(a) => commands::mask(a),
        Command::Bench(a) => commands::bench(a),
        Command::Primes { lo, hi } => commands::primes(lo, hi),
        Command::GenSource(a) => commands::gen_source(a),
        Command::Sanity(a) => commands::sanity(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qrx: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
