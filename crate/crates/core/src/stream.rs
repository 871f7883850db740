//! Stream extraction sessions.
//!
//! A session owns a mask computed offline from `(r, y)`. Raw data then
//! arrives in chunks of any size and is XORed against the mask at the
//! current cursor. Bits that land in the first `m` positions are output;
//! the rest are kept so the tail of `x ⊕ w` can seed the next session.

use std::sync::Arc;

use serde::Serialize;

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::families::{prepare_mask, Mask};
use crate::params::{ExtractorParams, Log2Eps, Mode, SeedBundle};

/// Soundness accounting across chained sessions: every reuse of the seed
/// adds one more `eps` to the total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessLedger {
    pub base_log2_eps: Log2Eps,
    pub reuse_count: u64,
}

impl SoundnessLedger {
    pub fn new(base_log2_eps: Log2Eps) -> Self {
        Self {
            base_log2_eps,
            reuse_count: 0,
        }
    }

    /// `total_eps / base_eps`, an exact integer under additive composition.
    pub fn multiplier(&self) -> u64 {
        self.reuse_count + 1
    }

    /// `log2((reuse_count + 1) · 2^base)`.
    pub fn total_log2_eps(&self) -> f64 {
        self.base_log2_eps.as_f64() + (self.multiplier() as f64).log2()
    }

    pub fn charged_reuse(&self) -> Self {
        Self {
            reuse_count: self.reuse_count + 1,
            ..*self
        }
    }
}

/// One in-progress stream extraction.
#[derive(Clone, Debug)]
pub struct StreamSession {
    params: ExtractorParams,
    mask: Arc<Mask>,
    y: BitVector,
    cursor: usize,
    output: BitVector,
    tail: BitVector,
    ledger: SoundnessLedger,
}

/// Result of a completed session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalizedStream {
    pub params: ExtractorParams,
    pub output: BitVector,
    pub next_r: BitVector,
    pub ledger: SoundnessLedger,
    y: BitVector,
}

impl FinalizedStream {
    /// Hash-selector seed of the session, reused when chaining.
    pub fn y(&self) -> &BitVector {
        &self.y
    }
}

impl StreamSession {
    /// Computes the mask and opens a fresh session.
    pub fn prepare(params: ExtractorParams, seeds: SeedBundle) -> Result<Self> {
        let mask = prepare_mask(&params, &seeds)?;
        Ok(Self::open(params, Arc::new(mask), seeds.y, SoundnessLedger::new(params.soundness())))
    }

    /// Opens a session on a mask computed earlier (the offline half of the
    /// split). `y` is only needed if the session will be chained.
    pub fn with_mask(params: ExtractorParams, mask: Mask, y: BitVector) -> Result<Self> {
        if params.mode != Mode::Stream {
            return Err(Error::InvalidParams("sessions require stream mode".into()));
        }
        if mask.family() != params.family || mask.n() != params.n || mask.m() != params.m {
            return Err(Error::InvalidParams(format!(
                "mask for ({}, n = {}, m = {}) does not match session ({}, n = {}, m = {})",
                mask.family(),
                mask.n(),
                mask.m(),
                params.family,
                params.n,
                params.m
            )));
        }
        Ok(Self::open(params, Arc::new(mask), y, SoundnessLedger::new(params.soundness())))
    }

    fn open(params: ExtractorParams, mask: Arc<Mask>, y: BitVector, ledger: SoundnessLedger) -> Self {
        Self {
            params,
            mask,
            y,
            cursor: 0,
            output: BitVector::new(),
            tail: BitVector::new(),
            ledger,
        }
    }

    pub fn params(&self) -> &ExtractorParams {
        &self.params
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn ledger(&self) -> &SoundnessLedger {
        &self.ledger
    }

    pub fn raw_len(&self) -> usize {
        self.params.raw_len()
    }

    pub fn remaining(&self) -> usize {
        self.raw_len() - self.cursor
    }

    /// XORs `chunk` against the mask at the cursor and returns the output
    /// bits it completes (possibly none).
    pub fn process_chunk(&mut self, chunk: &BitVector) -> Result<BitVector> {
        let expected = self.raw_len();
        if chunk.len() > self.remaining() {
            return Err(Error::StreamOverflow {
                chunk: chunk.len(),
                consumed: self.cursor,
                expected,
            });
        }
        if chunk.is_empty() {
            return Ok(BitVector::new());
        }
        let mixed = chunk.xor(&self.mask.bits().range(self.cursor, chunk.len())?)?;
        let m = self.params.m;
        let out_bits = m.saturating_sub(self.cursor).min(chunk.len());
        let fresh = mixed.range(0, out_bits)?;
        self.output.append(&fresh);
        self.tail.append(&mixed.range(out_bits, chunk.len() - out_bits)?);
        self.cursor += chunk.len();
        Ok(fresh)
    }

    /// Returns the `m`-bit output and the harvested seed for the next
    /// session. The ledger is charged only when that seed is actually used.
    pub fn finalize(self) -> Result<FinalizedStream> {
        if self.cursor != self.raw_len() {
            return Err(Error::IncompleteStream {
                consumed: self.cursor,
                expected: self.raw_len(),
            });
        }
        Ok(FinalizedStream {
            params: self.params,
            output: self.output,
            next_r: self.tail,
            ledger: self.ledger,
            y: self.y,
        })
    }

    /// Starts a session that reuses `prev`'s `y` and takes its harvested bits
    /// as `r`, charging the ledger one more `eps`.
    pub fn chain(prev: &FinalizedStream, params: ExtractorParams) -> Result<Self> {
        if params.family != prev.params.family || params.n != prev.params.n || params.m != prev.params.m {
            return Err(Error::InvalidParams(format!(
                "cannot chain ({}, n = {}, m = {}) into ({}, n = {}, m = {})",
                prev.params.family, prev.params.n, prev.params.m, params.family, params.n, params.m
            )));
        }
        let seeds = SeedBundle::new(prev.next_r.clone(), prev.y.clone());
        let mask = prepare_mask(&params, &seeds)?;
        let ledger = prev.ledger.charged_reuse();
        Ok(Self::open(params, Arc::new(mask), prev.y.clone(), ledger))
    }
}

/// Runs a whole raw vector through a session in chunks of `chunk_bits`.
pub fn extract_chunked(mut session: StreamSession, x: &BitVector, chunk_bits: usize) -> Result<FinalizedStream> {
    if chunk_bits == 0 {
        return Err(Error::InvalidParams("chunk size must be positive".into()));
    }
    let mut at = 0;
    while at < x.len() {
        let len = chunk_bits.min(x.len() - at);
        session.process_chunk(&x.range(at, len)?)?;
        at += len;
    }
    session.finalize()
}
