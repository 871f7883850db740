//! Synthetic biased bit sources for benchmarks and tests.
//!
//! NOT a cryptographic source: the bits come from a seeded ChaCha stream and
//! are fully determined by `rng_seed`.

use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bits::{write_bits, BitVector};
use crate::error::{Error, Result};
use crate::manifest::Manifest;

/// Per-bit min-entropy `-log2(max(p, 1 - p))` of an IID Bernoulli(p) source.
pub fn min_entropy_rate(p: f64) -> f64 {
    -p.max(1.0 - p).log2()
}

/// `len` IID bits that are one with probability `p`.
pub fn bernoulli_bits(len: usize, p: f64, rng_seed: u64) -> Result<BitVector> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParams(format!("bias must lie in (0, 1), got {p}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    if p == 0.5 {
        return Ok(BitVector::random(&mut rng, len));
    }
    // compare 53-bit uniforms against the threshold, one word at a time
    let words = (0..len.div_ceil(64))
        .map(|_| {
            let mut w = 0u64;
            for bit in 0..64 {
                if rng.random::<f64>() < p {
                    w |= 1 << bit;
                }
            }
            w
        })
        .collect();
    Ok(BitVector::from_words(words, len))
}

/// Uniform bits from a seeded stream, for benchmark seeds only.
pub fn uniform_bits(len: usize, rng_seed: u64) -> BitVector {
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    let words = (0..len.div_ceil(64)).map(|_| rng.next_u64()).collect();
    BitVector::from_words(words, len)
}

/// Writes a Bernoulli source file plus its manifest and returns the manifest.
pub fn write_source(path: &Path, bits: u64, p: f64, rng_seed: u64) -> Result<Manifest> {
    let v = bernoulli_bits(bits as usize, p, rng_seed)?;
    write_bits(path, &v)?;
    let manifest = Manifest::new(bits, "synthetic IID Bernoulli source (not cryptographic)")
        .with("bias_p", p)
        .with("min_entropy_rate", min_entropy_rate(p))
        .with("rng_seed", rng_seed);
    manifest.write_for(path)?;
    Ok(manifest)
}
