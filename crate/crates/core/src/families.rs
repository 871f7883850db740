//! The three hashing families in block and stream form, each reduced to one
//! exact GF(2) convolution.
//!
//! Seed layouts (index 0 of the `BitVector` first):
//!
//! * Toeplitz: `y = (y_{-(n-1)}, …, y_{m-1})`, matrix entry `(i, j) = y_{i-j}`.
//!   The stream mask uses the same layout for the `(n - m) × n` matrix.
//! * Circulant: `y = (y_0, …, y_{n-1})` for prime `n`; raw input has `n - 1`
//!   bits and gets one zero appended.
//! * Modified Toeplitz, block: `y = (y_{1-m}, …, y_{n-m-1})`, `M_y` is
//!   `m × (n - m)` with entry `(i, j) = y_{j-i}`.
//! * Modified Toeplitz, stream: `y = (y_{1+m-n}, …, y_{m-1})`, `M_y` is
//!   `(n - m) × m` with entry `(i, j) = y_{j-i}`.

use crate::bits::BitVector;
use crate::conv::{cyclic_conv_gf2, linear_conv_gf2};
use crate::error::{Error, Result};
use crate::params::{is_primitive_root_2, ExtractorParams, Family, Mode, SeedBundle};

/// A prepared stream mask `w` together with the instance it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    w: BitVector,
    family: Family,
    n: usize,
    m: usize,
}

impl Mask {
    /// Wraps a previously computed mask, e.g. one loaded from disk.
    pub fn from_bits(w: BitVector, family: Family, n: usize, m: usize) -> Result<Self> {
        let expected = match family {
            Family::Circulant => n - 1,
            _ => n,
        };
        check_len(expected, w.len())?;
        Ok(Self { w, family, n, m })
    }

    pub fn bits(&self) -> &BitVector {
        &self.w
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// Length of the reusable tail of `x ⊕ w`.
    pub fn reuse_tail_len(&self) -> usize {
        self.w.len() - self.m
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

/// Product of a `rows × cols` Toeplitz matrix with entry `(i, j) =
/// gen[i - j + cols - 1]` and a vector `v` of length `cols`.
///
/// Those entries are the middle coefficients of `gen * v`.
fn toeplitz_product(gen: &BitVector, v: &BitVector, rows: usize) -> Result<BitVector> {
    let cols = v.len();
    check_len(rows + cols - 1, gen.len())?;
    linear_conv_gf2(gen, v)?.range(cols - 1, rows)
}

/// Index reflection `(v_0, v_{n-1}, …, v_1)` that turns a circulant product
/// into a cyclic convolution.
fn reflect(v: &BitVector) -> BitVector {
    let mut out = BitVector::zeros(1);
    out.set(0, v.get(0));
    out.append(&v.range(1, v.len() - 1).expect("nonempty").reversed());
    out
}

fn check_circulant_dim(n: usize) -> Result<()> {
    if !is_primitive_root_2(n as u64) {
        return Err(Error::NotCirculantPrime(n as u64));
    }
    Ok(())
}

/// `T_y · x` for an `m × n` Toeplitz matrix; `y` has `n + m - 1` bits.
pub fn toeplitz_block(x: &BitVector, y: &BitVector, m: usize) -> Result<BitVector> {
    let n = x.len();
    if m == 0 || m > n {
        return Err(Error::InvalidParams(format!("toeplitz output length {m} invalid for n = {n}")));
    }
    toeplitz_product(y, x, m)
}

/// First `m` bits of `C_{x'} · y` with `x' = (x_raw ‖ 0)`. `y` has `n` bits for a
/// prime `n` with primitive root 2; `x_raw` has `n - 1`.
pub fn circulant_block(x_raw: &BitVector, y: &BitVector, m: usize) -> Result<BitVector> {
    let n = y.len();
    check_circulant_dim(n)?;
    check_len(n - 1, x_raw.len())?;
    if m == 0 || m >= n {
        return Err(Error::InvalidParams(format!("circulant output length {m} invalid for n = {n}")));
    }
    let mut padded = x_raw.clone();
    padded.push(false);
    cyclic_conv_gf2(&reflect(&padded), y)?.range(0, m)
}

/// `(M_y, I_m) · x = M_y · x_low ⊕ x_high`; `y` has `n - 1` bits.
pub fn modified_toeplitz_block(x: &BitVector, y: &BitVector, m: usize) -> Result<BitVector> {
    let n = x.len();
    if m == 0 || m >= n {
        return Err(Error::InvalidParams(format!("modified toeplitz output length {m} invalid for n = {n}")));
    }
    check_len(n - 1, y.len())?;
    let low = x.range(0, n - m)?;
    let high = x.range(n - m, m)?;
    // M_y is the standard layout generated by y reversed
    let mut z = toeplitz_product(&y.reversed(), &low, m)?;
    z.xor_assign(&high)?;
    Ok(z)
}

/// `w = T_y^T · r` for the `(n - m) × n` Toeplitz matrix of `y`.
/// `r` has `n - m` bits and `y` has `2n - m - 1`.
pub fn toeplitz_mask(r: &BitVector, y: &BitVector) -> Result<Mask> {
    let rows = r.len();
    if rows == 0 || y.len() < 2 * rows {
        return Err(Error::InvalidParams(format!(
            "toeplitz mask seeds of {} and {} bits do not fit any m >= 1",
            r.len(),
            y.len()
        )));
    }
    let n = y.len() + 1 - rows;
    let m = n - rows;
    // the transpose of a Toeplitz matrix is generated by the reversed vector
    let w = toeplitz_product(&y.reversed(), r, n)?;
    Ok(Mask {
        w,
        family: Family::Toeplitz,
        n,
        m,
    })
}

/// `w = (C_{r'} · y)` truncated to `n - 1` bits, with `r' = (r ‖ 0^{m+1})`.
/// `r` has `n - m - 1` bits and `y` has `n`.
pub fn circulant_mask(r: &BitVector, y: &BitVector) -> Result<Mask> {
    let n = y.len();
    check_circulant_dim(n)?;
    if r.is_empty() || r.len() + 2 > n {
        return Err(Error::InvalidParams(format!(
            "circulant mask seed r of {} bits does not fit n = {n}",
            r.len()
        )));
    }
    let m = n - 1 - r.len();
    let mut padded = r.clone();
    padded.pad_zeros(m + 1);
    let w = cyclic_conv_gf2(&reflect(&padded), y)?.range(0, n - 1)?;
    Ok(Mask {
        w,
        family: Family::Circulant,
        n,
        m,
    })
}

/// `w = (M_y, I_{n-m})^T · r = (M_y^T · r ‖ r)`. `r` has `n - m` bits and `y`
/// has `n - 1`.
pub fn modified_toeplitz_mask(r: &BitVector, y: &BitVector) -> Result<Mask> {
    let n = y.len() + 1;
    if r.is_empty() || r.len() >= n {
        return Err(Error::InvalidParams(format!(
            "modified toeplitz mask seed r of {} bits does not fit n = {n}",
            r.len()
        )));
    }
    let m = n - r.len();
    // M_y^T is m × (n - m) in the standard layout generated by y itself
    let mut w = toeplitz_product(y, r, m)?;
    w.append(r);
    Ok(Mask {
        w,
        family: Family::ModifiedToeplitz,
        n,
        m,
    })
}

/// `z = (x ⊕ w)` truncated to the first `m` bits.
pub fn stream_finalize(x: &BitVector, mask: &Mask) -> Result<BitVector> {
    check_len(mask.len(), x.len())?;
    x.range(0, mask.m)?.xor(&mask.w.range(0, mask.m)?)
}

/// The last `n - m` bits of `x ⊕ w`, usable as the next stream seed `r`.
/// The caller's soundness ledger must be charged one more `eps`.
pub fn harvest_reuse_seed(xw: &BitVector, n: usize, m: usize) -> Result<BitVector> {
    check_len(n, xw.len())?;
    if m > n {
        return Err(Error::InvalidParams(format!("output length {m} exceeds n = {n}")));
    }
    xw.range(m, n - m)
}

/// Block extraction for any family.
pub fn block_extract(params: &ExtractorParams, x: &BitVector, y: &BitVector) -> Result<BitVector> {
    check_len(params.raw_len(), x.len())?;
    check_len(params.seed_lengths().y, y.len())?;
    match params.family {
        Family::Toeplitz => toeplitz_block(x, y, params.m),
        Family::Circulant => circulant_block(x, y, params.m),
        Family::ModifiedToeplitz => modified_toeplitz_block(x, y, params.m),
    }
}

/// Stream mask for any family.
pub fn prepare_mask(params: &ExtractorParams, seeds: &SeedBundle) -> Result<Mask> {
    if params.mode != Mode::Stream {
        return Err(Error::InvalidParams("masks exist only in stream mode".into()));
    }
    seeds.validate(params)?;
    match params.family {
        Family::Toeplitz => toeplitz_mask(&seeds.r, &seeds.y),
        Family::Circulant => circulant_mask(&seeds.r, &seeds.y),
        Family::ModifiedToeplitz => modified_toeplitz_mask(&seeds.r, &seeds.y),
    }
}

/// One-shot stream extraction: mask, XOR, truncate.
pub fn stream_extract(params: &ExtractorParams, x: &BitVector, seeds: &SeedBundle) -> Result<BitVector> {
    stream_finalize(x, &prepare_mask(params, seeds)?)
}
