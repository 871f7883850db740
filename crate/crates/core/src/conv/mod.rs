//! Exact linear and cyclic convolution over GF(2).
//!
//! Two exact backends are provided. [`Backend::Carryless`] packs 64 bits per
//! limb and multiplies with Karatsuba over carryless word products; its cost
//! follows the true operand lengths. [`Backend::Ntt`] maps one bit to one
//! coefficient of a number-theoretic transform over a 64-bit prime and is kept
//! as an independent exact cross-check. The naive double-loop versions are the
//! reference oracles for both.

mod carryless;
mod ntt;

pub use carryless::clmul_soft;

use crate::bits::{words_for, BitVector};
use crate::error::{Error, Result};

/// Exact multiplication strategy behind the convolution functions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Word-packed Karatsuba with hardware carryless multiply when available.
    #[default]
    Carryless,
    /// Same Karatsuba recursion with the portable software word product.
    CarrylessPortable,
    /// Number-theoretic transform, one coefficient per bit.
    Ntt,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Carryless, Backend::CarrylessPortable, Backend::Ntt];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConvKind {
    Linear,
    Cyclic,
}

/// Transform sizing for one convolution, in the power-of-two cost model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConvPlan {
    input_lengths: (usize, usize),
    kind: ConvKind,
    padded_len: usize,
}

impl ConvPlan {
    pub fn linear(la: usize, lb: usize) -> Result<Self> {
        if la == 0 || lb == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            input_lengths: (la, lb),
            kind: ConvKind::Linear,
            padded_len: padded_length(la + lb - 1)?,
        })
    }

    pub fn cyclic(la: usize, lb: usize) -> Result<Self> {
        if la == 0 || lb == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            input_lengths: (la, lb),
            kind: ConvKind::Cyclic,
            padded_len: padded_length(la.max(lb))?,
        })
    }

    pub fn input_lengths(&self) -> (usize, usize) {
        self.input_lengths
    }

    pub fn kind(&self) -> ConvKind {
        self.kind
    }

    /// Length of the convolution result before padding.
    pub fn required_len(&self) -> usize {
        let (la, lb) = self.input_lengths;
        match self.kind {
            ConvKind::Linear => la + lb - 1,
            ConvKind::Cyclic => la.max(lb),
        }
    }

    pub fn padded_len(&self) -> usize {
        self.padded_len
    }

    pub fn log2_padded_len(&self) -> u32 {
        self.padded_len.trailing_zeros()
    }
}

/// Smallest power of two that is at least `len`.
pub fn padded_length(len: usize) -> Result<usize> {
    if len == 0 {
        return Err(Error::EmptyInput);
    }
    len.checked_next_power_of_two()
        .ok_or_else(|| Error::InvalidParams(format!("length {len} has no representable power-of-two padding")))
}

fn product_words(a: &BitVector, b: &BitVector, portable: bool) -> BitVector {
    let words = if portable {
        carryless::mul_portable(a.words(), b.words())
    } else {
        carryless::mul(a.words(), b.words())
    };
    let len = a.len() + b.len() - 1;
    debug_assert!(words.len() >= words_for(len));
    BitVector::from_words(words, len)
}

fn product_ntt(a: &BitVector, b: &BitVector) -> BitVector {
    let fa: Vec<bool> = a.iter().collect();
    let fb: Vec<bool> = b.iter().collect();
    ntt::linear_parity(&fa, &fb).into_iter().collect()
}

/// GF(2) linear convolution (polynomial product) using the default backend.
pub fn linear_conv_gf2(a: &BitVector, b: &BitVector) -> Result<BitVector> {
    linear_conv_gf2_with(a, b, Backend::default())
}

pub fn linear_conv_gf2_with(a: &BitVector, b: &BitVector, backend: Backend) -> Result<BitVector> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(match backend {
        Backend::Carryless => product_words(a, b, false),
        Backend::CarrylessPortable => product_words(a, b, true),
        Backend::Ntt => product_ntt(a, b),
    })
}

/// GF(2) cyclic convolution of two length-`n` vectors using the default backend.
pub fn cyclic_conv_gf2(a: &BitVector, b: &BitVector) -> Result<BitVector> {
    cyclic_conv_gf2_with(a, b, Backend::default())
}

pub fn cyclic_conv_gf2_with(a: &BitVector, b: &BitVector, backend: Backend) -> Result<BitVector> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let n = a.len();
    let full = linear_conv_gf2_with(a, b, backend)?;
    fold(&full, n)
}

/// Reduces a linear convolution of length `2n - 1` modulo `x^n - 1`.
fn fold(full: &BitVector, n: usize) -> Result<BitVector> {
    let mut low = full.range(0, n)?;
    let high = full.range(n, full.len() - n)?;
    low.xor_at(0, &high)?;
    Ok(low)
}

/// Reference linear convolution by the quadratic double loop.
pub fn naive_linear_conv(a: &BitVector, b: &BitVector) -> Result<BitVector> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = BitVector::zeros(a.len() + b.len() - 1);
    for i in 0..a.len() {
        if !a.get(i) {
            continue;
        }
        for j in 0..b.len() {
            if b.get(j) {
                out.flip(i + j);
            }
        }
    }
    Ok(out)
}

/// Reference cyclic convolution: `out[i] = Σ_j a[j] b[(i - j) mod n]`.
pub fn naive_cyclic_conv(a: &BitVector, b: &BitVector) -> Result<BitVector> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let n = a.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut out = BitVector::zeros(n);
    for i in 0..n {
        let mut acc = false;
        for j in 0..n {
            acc ^= a.get(j) & b.get((i + n - j) % n);
        }
        out.set(i, acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits)
    }

    #[test]
    fn linear_examples_on_every_backend() {
        // (1 + x + x^3)(1 + x^2) = 1 + x + x^2 + x^5 over GF(2)
        let a = bv(&[1, 1, 0, 1]);
        let b = bv(&[1, 0, 1]);
        let want = bv(&[1, 1, 1, 0, 0, 1]);
        assert_eq!(naive_linear_conv(&a, &b).unwrap(), want);
        for backend in Backend::ALL {
            assert_eq!(linear_conv_gf2_with(&a, &b, backend).unwrap(), want, "{backend:?}");
            assert_eq!(linear_conv_gf2_with(&a, &bv(&[1]), backend).unwrap(), a);
            assert_eq!(
                linear_conv_gf2_with(&a, &BitVector::zeros(3), backend).unwrap(),
                BitVector::zeros(6)
            );
        }
        assert!(matches!(linear_conv_gf2(&a, &BitVector::new()), Err(Error::EmptyInput)));
        assert!(matches!(naive_linear_conv(&BitVector::new(), &a), Err(Error::EmptyInput)));
    }

    #[test]
    fn cyclic_examples_on_every_backend() {
        let a = bv(&[1, 0, 1]);
        let b = bv(&[1, 1, 0]);
        let want = bv(&[0, 1, 1]);
        assert_eq!(naive_cyclic_conv(&a, &b).unwrap(), want);
        let v = bv(&[0, 1, 1, 0, 1]);
        for backend in Backend::ALL {
            assert_eq!(cyclic_conv_gf2_with(&a, &b, backend).unwrap(), want);
            assert_eq!(cyclic_conv_gf2_with(&v, &bv(&[1, 0, 0, 0, 0]), backend).unwrap(), v);
            assert_eq!(cyclic_conv_gf2_with(&v, &BitVector::zeros(5), backend).unwrap(), BitVector::zeros(5));
        }
        assert!(matches!(cyclic_conv_gf2(&a, &v), Err(Error::LengthMismatch { .. })));
        assert!(naive_cyclic_conv(&a, &v).is_err());
    }

    #[test]
    fn padded_length_examples() {
        assert_eq!(padded_length(4).unwrap(), 4);
        assert_eq!(padded_length(5).unwrap(), 8);
        assert_eq!(padded_length(3 + 2 - 1).unwrap(), 4);
        assert_eq!(padded_length(1).unwrap(), 1);
        assert!(padded_length(0).is_err());
        let plan = ConvPlan::linear(3, 4).unwrap();
        assert_eq!((plan.required_len(), plan.padded_len(), plan.log2_padded_len()), (6, 8, 3));
        let plan = ConvPlan::cyclic(5, 5).unwrap();
        assert_eq!((plan.required_len(), plan.padded_len()), (5, 8));
    }

    #[test]
    fn exhaustive_small_lengths_match_naive() {
        for la in 1..=6usize {
            for lb in 1..=6usize {
                for xa in 0u64..(1 << la) {
                    for xb in 0u64..(1 << lb) {
                        let a = BitVector::from_words(vec![xa], la);
                        let b = BitVector::from_words(vec![xb], lb);
                        let want = naive_linear_conv(&a, &b).unwrap();
                        for backend in Backend::ALL {
                            assert_eq!(linear_conv_gf2_with(&a, &b, backend).unwrap(), want);
                        }
                        if la == lb {
                            let want = naive_cyclic_conv(&a, &b).unwrap();
                            for backend in Backend::ALL {
                                assert_eq!(cyclic_conv_gf2_with(&a, &b, backend).unwrap(), want);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn random_sweep_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let la = rng.random_range(1..=4096);
            let lb = rng.random_range(1..=4096);
            let a = BitVector::random(&mut rng, la);
            let b = BitVector::random(&mut rng, lb);
            let want = naive_linear_conv(&a, &b).unwrap();
            assert_eq!(linear_conv_gf2(&a, &b).unwrap(), want, "{la}x{lb}");
        }
        for _ in 0..50 {
            let n = rng.random_range(1..=2048);
            let a = BitVector::random(&mut rng, n);
            let b = BitVector::random(&mut rng, n);
            let want = naive_cyclic_conv(&a, &b).unwrap();
            for backend in Backend::ALL {
                assert_eq!(cyclic_conv_gf2_with(&a, &b, backend).unwrap(), want);
            }
        }
    }

    #[test]
    fn backends_agree_at_one_megabit() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let a = BitVector::random(&mut rng, 1 << 20);
        let b = BitVector::random(&mut rng, (1 << 20) - 77);
        let fast = linear_conv_gf2(&a, &b).unwrap();
        assert_eq!(linear_conv_gf2_with(&a, &b, Backend::Ntt).unwrap(), fast);
        let c = BitVector::random(&mut rng, (1 << 20) - 77);
        let cyc = cyclic_conv_gf2(&b, &c).unwrap();
        assert_eq!(cyclic_conv_gf2_with(&b, &c, Backend::Ntt).unwrap(), cyc);
    }

    fn arb_pair(max: usize) -> impl Strategy<Value = (BitVector, BitVector, BitVector)> {
        (1usize..max, 1usize..max).prop_flat_map(|(la, lb)| {
            let v = |n| prop::collection::vec(any::<bool>(), n).prop_map(|b| b.into_iter().collect::<BitVector>());
            (v(la), v(la), v(lb))
        })
    }

    proptest! {
        #[test]
        fn linear_in_first_argument((a, a2, b) in arb_pair(700)) {
            let lhs = linear_conv_gf2(&a.xor(&a2).unwrap(), &b).unwrap();
            let rhs = linear_conv_gf2(&a, &b).unwrap().xor(&linear_conv_gf2(&a2, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn commutative((a, _a2, b) in arb_pair(700)) {
            prop_assert_eq!(linear_conv_gf2(&a, &b).unwrap(), linear_conv_gf2(&b, &a).unwrap());
        }

        #[test]
        fn cyclic_is_folded_linear((a, b, _c) in arb_pair(700)) {
            let n = a.len();
            let lin = naive_linear_conv(&a, &b).unwrap();
            let mut folded = BitVector::zeros(n);
            for i in 0..lin.len() {
                if lin.get(i) { folded.flip(i % n); }
            }
            prop_assert_eq!(cyclic_conv_gf2(&a, &b).unwrap(), folded);
        }
    }
}
