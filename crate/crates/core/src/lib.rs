//! Seeded randomness extractors built from Toeplitz, circulant and modified
//! Toeplitz universal hashing, in block mode and in an offline-mask /
//! online-XOR stream mode.
//!
//! ```
//! use qrx_core::{BitVector, ExtractorParams, Family, Mode, SeedBundle, StreamSession};
//!
//! let params = ExtractorParams::with_output_len(Family::Toeplitz, Mode::Stream, 8, 6, 3).unwrap();
//! let lens = params.seed_lengths();
//! let seeds = SeedBundle::new(BitVector::ones(lens.r), BitVector::zeros(lens.y));
//! let mut session = StreamSession::prepare(params, seeds).unwrap();
//! session.process_chunk(&BitVector::from_bits(&[1, 0, 1, 1, 0, 0, 1, 0])).unwrap();
//! let done = session.finalize().unwrap();
//! assert_eq!(done.output.len(), 3);
//! ```

pub mod bench;
pub mod bits;
pub mod conv;
pub mod error;
pub mod families;
pub mod manifest;
pub mod oracle;
pub mod params;
pub mod sanity;
pub mod source;
pub mod stream;

pub use bits::{bitxor, file_bit_len, read_bits, write_bits, BitReader, BitVector};
pub use conv::{cyclic_conv_gf2, linear_conv_gf2, Backend};
pub use error::{Error, Result};
pub use families::{block_extract, prepare_mask, stream_extract, Mask};
pub use manifest::Manifest;
pub use params::{
    circulant_primes, kernel_length, next_circulant_prime, output_length, predicted_ops, seed_lengths, soundness,
    ExtractorParams, Family, Log2Eps, Mode, SeedBundle, SeedLengths,
};
pub use stream::{extract_chunked, FinalizedStream, SoundnessLedger, StreamSession};
