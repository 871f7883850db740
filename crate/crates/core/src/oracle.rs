//! Dense GF(2) matrices built entry by entry from the hashing-matrix
//! definitions. These are reference implementations for testing the
//! convolution-based extractors and are quadratic in the input size.

use crate::bits::BitVector;
use crate::error::{Error, Result};

/// Row-major dense matrix over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.set(i, i, true);
        }
        out
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                actual: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.rows[i].set(j, bit);
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.nrows());
        for i in 0..self.nrows() {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out.set(j, i, true);
                }
            }
        }
        out
    }

    /// Row concatenation `(self, other)`: same number of rows, columns appended.
    pub fn hconcat(&self, other: &Gf2Matrix) -> Result<Self> {
        if self.nrows() != other.nrows() {
            return Err(Error::LengthMismatch {
                expected: self.nrows(),
                actual: other.nrows(),
            });
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.concat(b)).collect();
        Ok(Self {
            cols: self.cols + other.cols,
            rows,
        })
    }
}

/// `M · v` over GF(2).
pub fn gf2_matvec(matrix: &Gf2Matrix, v: &BitVector) -> Result<BitVector> {
    if v.len() != matrix.ncols() {
        return Err(Error::LengthMismatch {
            expected: matrix.ncols(),
            actual: v.len(),
        });
    }
    matrix.rows.iter().map(|row| row.dot(v)).collect()
}

/// `m × n` Toeplitz matrix with entry `(i, j) = y_{i-j}`, where the seed is
/// stored as `(y_{-(n-1)}, …, y_{m-1})`.
pub fn build_toeplitz(y: &BitVector, m: usize, n: usize) -> Result<Gf2Matrix> {
    if m == 0 || n == 0 || y.len() != n + m - 1 {
        return Err(Error::LengthMismatch {
            expected: (n + m).saturating_sub(1),
            actual: y.len(),
        });
    }
    let mut t = Gf2Matrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            t.set(i, j, y.get(i + n - 1 - j));
        }
    }
    Ok(t)
}

/// `n × n` circulant matrix whose row `i` is `x` rotated right by `i`.
pub fn build_circulant(x: &BitVector) -> Result<Gf2Matrix> {
    let n = x.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut c = Gf2Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            c.set(i, j, x.get((j + n - i) % n));
        }
    }
    Ok(c)
}

/// Block-mode `m × (n - m)` matrix with entry `(i, j) = y_{j-i}`, seed stored
/// as `(y_{1-m}, …, y_{n-m-1})`.
pub fn build_modified(y: &BitVector, m: usize, n: usize) -> Result<Gf2Matrix> {
    if m == 0 || m >= n || y.len() != n - 1 {
        return Err(Error::LengthMismatch {
            expected: n.saturating_sub(1),
            actual: y.len(),
        });
    }
    let mut out = Gf2Matrix::zeros(m, n - m);
    for i in 0..m {
        for j in 0..n - m {
            out.set(i, j, y.get(j + m - 1 - i));
        }
    }
    Ok(out)
}

/// Stream-mode `(n - m) × m` matrix with entry `(i, j) = y_{j-i}`, seed
/// stored as `(y_{1+m-n}, …, y_{m-1})`.
pub fn build_modified_stream(y: &BitVector, m: usize, n: usize) -> Result<Gf2Matrix> {
    if m == 0 || m >= n || y.len() != n - 1 {
        return Err(Error::LengthMismatch {
            expected: n.saturating_sub(1),
            actual: y.len(),
        });
    }
    let mut out = Gf2Matrix::zeros(n - m, m);
    for i in 0..n - m {
        for j in 0..m {
            out.set(i, j, y.get(j + n - m - 1 - i));
        }
    }
    Ok(out)
}

pub fn naive_toeplitz_block(x: &BitVector, y: &BitVector, m: usize) -> Result<BitVector> {
    gf2_matvec(&build_toeplitz(y, m, x.len())?, x)
}

pub fn naive_circulant_block(x_raw: &BitVector, y: &BitVector, m: usize) -> Result<BitVector> {
    let mut padded = x_raw.clone();
    padded.push(false);
    let full = gf2_matvec(&build_circulant(&padded)?, y)?;
    full.range(0, m)
}

pub fn naive_modified_block(x: &BitVector, y: &BitVector, m: usize) -> Result<BitVector> {
    let n = x.len();
    let matrix = build_modified(y, m, n)?.hconcat(&Gf2Matrix::identity(m))?;
    gf2_matvec(&matrix, x)
}

pub fn naive_toeplitz_mask(r: &BitVector, y: &BitVector) -> Result<BitVector> {
    let rows = r.len();
    let n = (y.len() + 1).checked_sub(rows).ok_or(Error::EmptyInput)?;
    gf2_matvec(&build_toeplitz(y, rows, n)?.transpose(), r)
}

pub fn naive_circulant_mask(r: &BitVector, y: &BitVector) -> Result<BitVector> {
    let n = y.len();
    let mut padded = r.clone();
    padded.pad_zeros(n.checked_sub(r.len()).ok_or(Error::EmptyInput)?);
    let full = gf2_matvec(&build_circulant(&padded)?, y)?;
    full.range(0, n - 1)
}

pub fn naive_modified_mask(r: &BitVector, y: &BitVector) -> Result<BitVector> {
    let n = y.len() + 1;
    let m = n.checked_sub(r.len()).ok_or(Error::EmptyInput)?;
    let matrix = build_modified_stream(y, m, n)?.hconcat(&Gf2Matrix::identity(n - m))?;
    gf2_matvec(&matrix.transpose(), r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits)
    }

    #[test]
    fn toeplitz_layout() {
        let t = build_toeplitz(&bv(&[1, 0, 1, 1]), 2, 3).unwrap();
        assert_eq!(t.row(0), &bv(&[1, 0, 1]));
        assert_eq!(t.row(1), &bv(&[1, 1, 0]));
        assert!(build_toeplitz(&bv(&[1, 0, 1]), 2, 3).is_err());
    }

    #[test]
    fn circulant_layout() {
        let c = build_circulant(&bv(&[1, 0, 1, 1, 0])).unwrap();
        assert_eq!(c.row(0), &bv(&[1, 0, 1, 1, 0]));
        assert_eq!(c.row(1), &bv(&[0, 1, 0, 1, 1]));
        assert_eq!(c.row(4), &bv(&[0, 1, 1, 0, 1]));
    }

    #[test]
    fn modified_layouts() {
        let mb = build_modified(&bv(&[1, 0, 1, 1]), 2, 5).unwrap();
        assert_eq!(mb.row(0), &bv(&[0, 1, 1]));
        assert_eq!(mb.row(1), &bv(&[1, 0, 1]));
        // stream layout, n = 5, m = 2: y = (y_{-2}, y_{-1}, y_0, y_1)
        let ms = build_modified_stream(&bv(&[1, 0, 1, 1]), 2, 5).unwrap();
        assert_eq!(ms.row(0), &bv(&[1, 1]));
        assert_eq!(ms.row(1), &bv(&[0, 1]));
        assert_eq!(ms.row(2), &bv(&[1, 0]));
    }

    #[test]
    fn matvec_identity_and_errors() {
        let v = bv(&[1, 0, 0, 1, 1]);
        assert_eq!(gf2_matvec(&Gf2Matrix::identity(5), &v).unwrap(), v);
        assert!(gf2_matvec(&Gf2Matrix::identity(4), &v).is_err());
        let a = Gf2Matrix::identity(2);
        assert!(a.hconcat(&Gf2Matrix::identity(3)).is_err());
        assert_eq!(a.transpose(), a);
    }

    #[test]
    fn naive_extractor_examples() {
        assert_eq!(naive_toeplitz_block(&bv(&[1, 1, 0]), &bv(&[1, 0, 1, 1]), 2).unwrap(), bv(&[1, 0]));
        assert_eq!(
            naive_circulant_block(&bv(&[1, 0, 1, 1]), &bv(&[1, 1, 0, 0, 1]), 2).unwrap(),
            bv(&[1, 0])
        );
        assert_eq!(
            naive_modified_block(&bv(&[1, 1, 0, 1, 0]), &bv(&[1, 0, 1, 1]), 2).unwrap(),
            bv(&[0, 1])
        );
        // n = 3, m = 1: T_y rows (0,1,1) and (1,0,1); r = (1,0) picks row 0
        assert_eq!(naive_toeplitz_mask(&bv(&[1, 0]), &bv(&[1, 1, 0, 1])).unwrap(), bv(&[0, 1, 1]));
    }
}
