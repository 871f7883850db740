//! Packed binary vectors over GF(2) and headerless bitstream file I/O.
//!
//! Bit `i` of a [`BitVector`] is stored in word `i / 64` at bit position
//! `i % 64`, so a vector doubles as the coefficient list of a polynomial in
//! GF(2)\[x\] with bit `i` holding the coefficient of `x^i`.
//!
//! Files are read and written most-significant-bit first: byte 0, bit 7 is
//! index 0 of the vector. A final partial byte is padded with zeros in the
//! low bits; the exact bit length travels separately (see [`crate::manifest`]).

use std::fmt;
use std::fs::File;
use std::io::{self, Read, Seek, SeekFrom, Write};
use std::path::Path;

use rand::RngCore;

use crate::error::{Error, Result};

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A fixed-length vector of bits packed into 64-bit words.
///
/// Storage bits beyond `len` are always zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            words: vec![u64::MAX; words_for(len)],
            len,
        };
        v.clear_tail();
        v
    }

    /// Builds a vector from a slice of 0/1 values. Any nonzero byte is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b != 0).collect()
    }

    /// Wraps raw little-endian words. Bits at or beyond `len` are cleared.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { words, len };
        v.clear_tail();
        v
    }

    /// Uniformly random bits. Only used for tests and benchmarks; extraction
    /// seeds must come from a trusted source.
    pub fn random<R: RngCore + ?Sized>(rng: &mut R, len: usize) -> Self {
        let words = (0..words_for(len)).map(|_| rng.next_u64()).collect();
        Self::from_words(words, len)
    }

    /// Decodes `len` bits from MSB-first bytes.
    pub fn from_bytes_msb(bytes: &[u8], len: usize) -> Result<Self> {
        let available = bytes.len() * 8;
        if len > available {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: available,
            });
        }
        let nbytes = len.div_ceil(8);
        let mut words = Vec::with_capacity(words_for(len));
        for chunk in bytes[..nbytes].chunks(8) {
            let mut buf = [0u8; 8];
            for (dst, &src) in buf.iter_mut().zip(chunk) {
                *dst = src.reverse_bits();
            }
            words.push(u64::from_le_bytes(buf));
        }
        Ok(Self::from_words(words, len))
    }

    /// Encodes as MSB-first bytes, zero-padding the last byte's low bits.
    pub fn to_bytes_msb(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        for w in &self.words {
            out.extend(w.to_le_bytes().iter().map(|b| b.reverse_bits()));
        }
        out.truncate(nbytes);
        out
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Parity of the bitwise AND with `other`, i.e. the GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> Result<bool> {
        check_len(self.len, other.len)?;
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones & 1 == 1)
    }

    /// Bitwise XOR of two vectors of equal length.
    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        check_len(self.len, other.len)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// XORs `other` into this vector starting at bit `offset`.
    pub fn xor_at(&mut self, offset: usize, other: &BitVector) -> Result<()> {
        if other.is_empty() {
            return Ok(());
        }
        let end = offset + other.len;
        if end > self.len {
            return Err(Error::OutOfRange {
                start: offset,
                end: end - 1,
                len: self.len,
            });
        }
        let base = offset / WORD_BITS;
        let shift = offset % WORD_BITS;
        if shift == 0 {
            for (a, b) in self.words[base..].iter_mut().zip(&other.words) {
                *a ^= b;
            }
        } else {
            for (k, &w) in other.words.iter().enumerate() {
                self.words[base + k] ^= w << shift;
                let carry = w >> (WORD_BITS - shift);
                if carry != 0 {
                    self.words[base + k + 1] ^= carry;
                }
            }
        }
        Ok(())
    }

    /// Bits `i..=j`, inclusive on both ends.
    pub fn slice(&self, i: usize, j: usize) -> Result<BitVector> {
        if i > j || j >= self.len {
            return Err(Error::OutOfRange {
                start: i,
                end: j,
                len: self.len,
            });
        }
        Ok(self.extract(i, j - i + 1))
    }

    /// `count` bits starting at `start`; an empty range is allowed anywhere
    /// up to `len`.
    pub fn range(&self, start: usize, count: usize) -> Result<BitVector> {
        if start + count > self.len {
            return Err(Error::OutOfRange {
                start,
                end: (start + count).saturating_sub(1),
                len: self.len,
            });
        }
        Ok(self.extract(start, count))
    }

    fn extract(&self, start: usize, count: usize) -> BitVector {
        let nwords = words_for(count);
        let mut words = Vec::with_capacity(nwords);
        let base = start / WORD_BITS;
        let shift = start % WORD_BITS;
        for k in 0..nwords {
            let lo = self.words[base + k] >> shift;
            let hi = if shift != 0 {
                self.words.get(base + k + 1).map_or(0, |w| w << (WORD_BITS - shift))
            } else {
                0
            };
            words.push(lo | hi);
        }
        BitVector::from_words(words, count)
    }

    /// `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.append(other);
        out
    }

    pub fn append(&mut self, other: &BitVector) {
        let shift = self.len % WORD_BITS;
        let new_len = self.len + other.len;
        if shift == 0 {
            self.words.extend_from_slice(&other.words);
        } else {
            for &w in &other.words {
                *self.words.last_mut().expect("nonzero shift implies a word") |= w << shift;
                self.words.push(w >> (WORD_BITS - shift));
            }
        }
        self.words.truncate(words_for(new_len));
        self.len = new_len;
    }

    /// Appends `count` zero bits.
    pub fn pad_zeros(&mut self, count: usize) {
        self.len += count;
        self.words.resize(words_for(self.len), 0);
    }

    pub fn truncate(&mut self, len: usize) {
        if len < self.len {
            self.len = len;
            self.words.truncate(words_for(len));
            self.clear_tail();
        }
    }

    /// Bit order reversed: output bit `i` is input bit `len - 1 - i`.
    pub fn reversed(&self) -> BitVector {
        if self.is_empty() {
            return BitVector::new();
        }
        let words: Vec<u64> = self.words.iter().rev().map(|w| w.reverse_bits()).collect();
        let padded = BitVector {
            len: words.len() * WORD_BITS,
            words,
        };
        padded.extract(padded.len - self.len, self.len)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

#[inline]
fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

/// Bitwise XOR of two equal-length vectors.
pub fn bitxor(a: &BitVector, b: &BitVector) -> Result<BitVector> {
    a.xor(b)
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut v = BitVector::new();
        for bit in iter {
            v.push(bit);
        }
        v
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 128;
        write!(f, "BitVector[{}](", self.len)?;
        for bit in self.iter().take(SHOWN) {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        if self.len > SHOWN {
            f.write_str("…")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Reads `count` bits starting at bit `offset` of a headerless bitstream file.
pub fn read_bits(path: impl AsRef<Path>, offset: u64, count: u64) -> Result<BitVector> {
    let path = path.as_ref();
    let mut file = File::open(path)?;
    let available = file.metadata()?.len() * 8;
    if offset + count > available {
        return Err(Error::ShortRead {
            path: path.to_path_buf(),
            needed: offset + count,
            available,
        });
    }
    let first_byte = offset / 8;
    let lead = (offset % 8) as usize;
    let nbytes = (lead + count as usize).div_ceil(8);
    file.seek(SeekFrom::Start(first_byte))?;
    let mut buf = vec![0u8; nbytes];
    file.read_exact(&mut buf)?;
    let v = BitVector::from_bytes_msb(&buf, nbytes * 8)?;
    v.range(lead, count as usize)
}

/// Number of bits a headerless file holds (its byte length times eight).
pub fn file_bit_len(path: impl AsRef<Path>) -> Result<u64> {
    Ok(std::fs::metadata(path)?.len() * 8)
}

/// Writes `v` as a headerless bitstream. The file is written under a
/// temporary name and renamed into place.
pub fn write_bits(path: impl AsRef<Path>, v: &BitVector) -> Result<()> {
    write_atomic(path.as_ref(), &v.to_bytes_msb())
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Sequential bit reader over any byte source; hands out bit-exact pieces
/// regardless of byte alignment.
pub struct BitReader<R> {
    inner: R,
    pending: BitVector,
    consumed: u64,
}

impl<R: Read> BitReader<R> {
    pub fn new(inner: R) -> Self {
        Self {
            inner,
            pending: BitVector::new(),
            consumed: 0,
        }
    }

    /// Bits handed out so far.
    pub fn position(&self) -> u64 {
        self.consumed
    }

    /// Reads exactly `count` bits or fails with `UnexpectedEof`.
    pub fn read(&mut self, count: usize) -> Result<BitVector> {
        if self.pending.len() < count {
            let need = (count - self.pending.len()).div_ceil(8);
            let mut buf = vec![0u8; need];
            self.inner.read_exact(&mut buf).map_err(|e| {
                if e.kind() == io::ErrorKind::UnexpectedEof {
                    io::Error::new(
                        io::ErrorKind::UnexpectedEof,
                        format!(
                            "bitstream ended after {} bits while reading {count} more",
                            self.consumed + self.pending.len() as u64
                        ),
                    )
                } else {
                    e
                }
            })?;
            let fresh = BitVector::from_bytes_msb(&buf, need * 8)?;
            self.pending.append(&fresh);
        }
        let out = self.pending.range(0, count)?;
        self.pending = self.pending.range(count, self.pending.len() - count)?;
        self.consumed += count as u64;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits)
    }

    #[test]
    fn xor_examples() {
        assert_eq!(bitxor(&bv(&[1, 0, 1]), &bv(&[1, 1, 0])).unwrap(), bv(&[0, 1, 1]));
        let v = bv(&[1, 1, 0, 1, 0, 0, 1]);
        assert_eq!(v.xor(&v).unwrap(), BitVector::zeros(7));
        assert_eq!(v.xor(&BitVector::zeros(7)).unwrap(), v);
        assert!(matches!(
            v.xor(&BitVector::zeros(6)),
            Err(Error::LengthMismatch { expected: 7, actual: 6 })
        ));
    }

    #[test]
    fn slice_examples() {
        let v = bv(&[1, 0, 1, 1, 0]);
        assert_eq!(v.slice(0, 2).unwrap(), bv(&[1, 0, 1]));
        assert_eq!(v.slice(0, 4).unwrap(), v);
        assert_eq!(v.slice(3, 4).unwrap(), bv(&[1, 0]));
        assert!(v.slice(3, 5).is_err());
        assert!(v.slice(3, 2).is_err());
    }

    #[test]
    fn concat_examples() {
        assert_eq!(bv(&[1, 1]).concat(&bv(&[0])), bv(&[1, 1, 0]));
        let v = bv(&[0, 1, 1]);
        assert_eq!(v.concat(&BitVector::new()), v);
        assert_eq!(bv(&[1]).concat(&bv(&[0, 1])), bv(&[1, 0, 1]));
    }

    #[test]
    fn byte_order_is_msb_first() {
        let v = BitVector::from_bytes_msb(&[0xA0], 3).unwrap();
        assert_eq!(v, bv(&[1, 0, 1]));
        assert_eq!(bv(&[1, 0, 1]).to_bytes_msb(), vec![0xA0]);
        assert!(BitVector::new().to_bytes_msb().is_empty());
    }

    #[test]
    fn file_examples() {
        let dir = tempfile::tempdir().unwrap();
        let a0 = dir.path().join("a0.bin");
        std::fs::write(&a0, [0xA0]).unwrap();
        assert_eq!(read_bits(&a0, 0, 3).unwrap(), bv(&[1, 0, 1]));
        let ff = dir.path().join("ff.bin");
        std::fs::write(&ff, [0xFF]).unwrap();
        assert_eq!(read_bits(&ff, 4, 4).unwrap(), bv(&[1, 1, 1, 1]));
        assert!(matches!(read_bits(&ff, 9, 1), Err(Error::ShortRead { .. })));
        assert!(matches!(read_bits(&ff, 4, 5), Err(Error::ShortRead { .. })));
        assert!(read_bits(dir.path().join("missing"), 0, 1).is_err());

        let out = dir.path().join("out.bin");
        write_bits(&out, &bv(&[1, 0, 1])).unwrap();
        assert_eq!(std::fs::read(&out).unwrap(), vec![0xA0]);
        write_bits(&out, &BitVector::new()).unwrap();
        assert!(std::fs::read(&out).unwrap().is_empty());
    }

    #[test]
    fn reversed_and_tail_invariant() {
        let v = bv(&[1, 1, 0, 0, 0, 1, 0]);
        assert_eq!(v.reversed(), bv(&[0, 1, 0, 0, 0, 1, 1]));
        let ones = BitVector::ones(70);
        assert_eq!(ones.words()[1], 0b111111);
        assert_eq!(ones.count_ones(), 70);
    }

    #[test]
    fn reader_hands_out_unaligned_pieces() {
        let bytes = [0b1011_0011u8, 0b0101_1110, 0xFF];
        let mut r = BitReader::new(&bytes[..]);
        assert_eq!(r.read(3).unwrap(), bv(&[1, 0, 1]));
        assert_eq!(r.read(7).unwrap(), bv(&[1, 0, 0, 1, 1, 0, 1]));
        assert_eq!(r.read(0).unwrap(), BitVector::new());
        assert_eq!(r.position(), 10);
        assert_eq!(r.read(14).unwrap().len(), 14);
        assert!(r.read(1).is_err());
    }

    fn arb_bits(max: usize) -> impl Strategy<Value = BitVector> {
        prop::collection::vec(any::<bool>(), 0..max).prop_map(|b| b.into_iter().collect())
    }

    fn arb_triple() -> impl Strategy<Value = (BitVector, BitVector, BitVector)> {
        (0usize..300).prop_flat_map(|n| {
            let v = || prop::collection::vec(any::<bool>(), n).prop_map(|b| b.into_iter().collect());
            (v(), v(), v())
        })
    }

    proptest! {
        #[test]
        fn xor_is_a_group((a, b, c) in arb_triple()) {
            prop_assert_eq!(a.xor(&b).unwrap().xor(&c).unwrap(), a.xor(&b.xor(&c).unwrap()).unwrap());
            prop_assert_eq!(a.xor(&b).unwrap(), b.xor(&a).unwrap());
            prop_assert!(a.xor(&a).unwrap().is_zero());
        }

        #[test]
        fn concat_then_slice_recovers_parts(a in arb_bits(200), b in arb_bits(200)) {
            let ab = a.concat(&b);
            prop_assert_eq!(ab.len(), a.len() + b.len());
            prop_assert_eq!(ab.range(0, a.len()).unwrap(), a.clone());
            prop_assert_eq!(ab.range(a.len(), b.len()).unwrap(), b.clone());
            let last = ab.words().last().copied().unwrap_or(0);
            let rem = ab.len() % 64;
            prop_assert!(rem == 0 || last >> rem == 0);
        }

        #[test]
        fn write_then_read_is_identity(v in arb_bits(400), lead in 0u64..16) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("v.bin");
            write_bits(&path, &v).unwrap();
            prop_assert_eq!(read_bits(&path, 0, v.len() as u64).unwrap(), v.clone());
            let shifted = BitVector::ones(lead as usize).concat(&v);
            write_bits(&path, &shifted).unwrap();
            prop_assert_eq!(read_bits(&path, lead, v.len() as u64).unwrap(), v);
        }

        #[test]
        fn xor_at_matches_bitwise(base in arb_bits(300), patch in arb_bits(100), off in 0usize..300) {
            prop_assume!(off + patch.len() <= base.len());
            let mut fast = base.clone();
            fast.xor_at(off, &patch).unwrap();
            let mut slow = base.clone();
            for (i, bit) in patch.iter().enumerate() {
                if bit { slow.flip(off + i); }
            }
            prop_assert_eq!(fast, slow);
        }
    }
}
