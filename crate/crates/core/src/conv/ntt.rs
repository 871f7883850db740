//! Number-theoretic transform over the prime 2^64 - 2^32 + 1.
//!
//! Each bit becomes one field coefficient. Convolution counts never exceed
//! `min(la, lb)`, which is far below the modulus, so the integer result is
//! exact and its parity is the GF(2) coefficient.

const P: u64 = 0xFFFF_FFFF_0000_0001;
const EPS: u64 = 0xFFFF_FFFF; // 2^64 mod P
const GENERATOR: u64 = 7;
const TWO_ADICITY: u32 = 32;

/// Largest supported transform length.
pub const MAX_LEN: usize = 1 << TWO_ADICITY;

#[inline]
fn reduce128(x: u128) -> u64 {
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_hi = hi >> 32;
    let hi_lo = hi & EPS;
    let (mut t0, borrow) = lo.overflowing_sub(hi_hi);
    if borrow {
        t0 = t0.wrapping_sub(EPS);
    }
    let t1 = hi_lo * EPS;
    let (mut r, carry) = t0.overflowing_add(t1);
    if carry {
        r = r.wrapping_add(EPS);
    }
    if r >= P {
        r - P
    } else {
        r
    }
}

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

#[inline]
fn add(a: u64, b: u64) -> u64 {
    let (s, c) = a.overflowing_add(b);
    if c || s >= P {
        s.wrapping_sub(P)
    } else {
        s
    }
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a.wrapping_sub(b).wrapping_add(P)
    }
}

fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

fn transform(a: &mut [u64], inverse: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two() && n <= MAX_LEN);
    if n == 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            a.swap(i, j);
        }
    }
    let mut root = pow(GENERATOR, (P - 1) >> bits);
    if inverse {
        root = pow(root, P - 2);
    }
    let half = n / 2;
    let mut twiddles = Vec::with_capacity(half);
    let mut w = 1u64;
    for _ in 0..half {
        twiddles.push(w);
        w = mul(w, root);
    }
    let mut len = 2;
    while len <= n {
        let stride = n / len;
        let h = len / 2;
        for block in a.chunks_exact_mut(len) {
            let (lo, hi) = block.split_at_mut(h);
            for (k, (u, v)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let t = mul(*v, twiddles[k * stride]);
                *v = sub(*u, t);
                *u = add(*u, t);
            }
        }
        len <<= 1;
    }
    if inverse {
        let n_inv = pow(n as u64, P - 2);
        for x in a.iter_mut() {
            *x = mul(*x, n_inv);
        }
    }
}

/// Integer linear convolution of two 0/1 sequences, reduced mod 2.
pub fn linear_parity(a: &[bool], b: &[bool]) -> Vec<bool> {
    let out_len = a.len() + b.len() - 1;
    let k = out_len.next_power_of_two();
    assert!(k <= MAX_LEN, "transform length {k} exceeds the field's two-adicity");
    let mut fa = vec![0u64; k];
    let mut fb = vec![0u64; k];
    for (dst, &bit) in fa.iter_mut().zip(a) {
        *dst = bit as u64;
    }
    for (dst, &bit) in fb.iter_mut().zip(b) {
        *dst = bit as u64;
    }
    transform(&mut fa, false);
    transform(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mul(*x, *y);
    }
    transform(&mut fa, true);
    fa.truncate(out_len);
    fa.into_iter().map(|c| c & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_matches_u128_remainder() {
        let samples = [0u128, 1, P as u128, P as u128 * 3 + 5, u128::MAX, (P as u128 - 1) * (P as u128 - 1)];
        for &x in &samples {
            assert_eq!(reduce128(x) as u128, x % P as u128, "x = {x}");
        }
    }

    #[test]
    fn root_has_full_order() {
        let root = pow(GENERATOR, (P - 1) >> TWO_ADICITY);
        assert_eq!(pow(root, 1 << TWO_ADICITY), 1);
        assert_ne!(pow(root, 1 << (TWO_ADICITY - 1)), 1);
    }

    #[test]
    fn integer_counts_are_exact() {
        // all-ones sequences produce triangular counts; parity alternates
        let a = vec![true; 9];
        let b = vec![true; 5];
        let got = linear_parity(&a, &b);
        let want: Vec<bool> = (0..13)
            .map(|i: usize| {
                let lo = i.saturating_sub(4);
                let hi = i.min(8);
                (hi - lo + 1) % 2 == 1
            })
            .collect();
        assert_eq!(got, want);
    }
}
