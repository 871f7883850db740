//! Word-packed GF(2)\[x\] multiplication: Karatsuba over 64-bit limbs with a
//! carryless-multiply schoolbook base case.

/// Limb count at or below which the schoolbook kernel is used.
const KARATSUBA_CUTOFF: usize = 64;

/// Carryless product of two 64-bit words as `(low, high)`.
#[inline]
pub fn clmul_soft(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    for i in 0..64 {
        let mask = 0u64.wrapping_sub((b >> i) & 1);
        lo ^= (a << i) & mask;
        if i != 0 {
            hi ^= (a >> (64 - i)) & mask;
        }
    }
    (lo, hi)
}

trait Kernel {
    /// `out = a * b` for operands of at most `KARATSUBA_CUTOFF` limbs;
    /// `out` has exactly `a.len() + b.len()` limbs.
    fn schoolbook(a: &[u64], b: &[u64], out: &mut [u64]);
}

struct Soft;

impl Kernel for Soft {
    fn schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
        out.fill(0);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let (lo, hi) = clmul_soft(x, y);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
    }
}

#[cfg(target_arch = "x86_64")]
struct Pclmul;

#[cfg(target_arch = "x86_64")]
impl Kernel for Pclmul {
    fn schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
        // SAFETY: this kernel is only selected after runtime detection.
        unsafe { schoolbook_pclmul(a, b, out) }
    }
}

/// Works on limb pairs: the four products of `(a_{2s}, a_{2s+1})` and
/// `(b_{2t}, b_{2t+1})` land at even limb offset `2(s+t)` (two of them) or
/// odd offset `2(s+t)+1` (the cross terms), so they accumulate in separate
/// 128-bit lanes without any shuffling.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn schoolbook_pclmul(a: &[u64], b: &[u64], out: &mut [u64]) {
    use std::arch::x86_64::*;
    const PAIRS: usize = KARATSUBA_CUTOFF / 2;
    debug_assert!(a.len() <= KARATSUBA_CUTOFF && b.len() <= KARATSUBA_CUTOFF);
    let mut ab = [0u64; KARATSUBA_CUTOFF];
    let mut bb = [0u64; KARATSUBA_CUTOFF];
    ab[..a.len()].copy_from_slice(a);
    bb[..b.len()].copy_from_slice(b);
    let pa = a.len().div_ceil(2);
    let pb = b.len().div_ceil(2);
    let load = |v: &[u64; KARATSUBA_CUTOFF], i: usize| _mm_set_epi64x(v[2 * i + 1] as i64, v[2 * i] as i64);
    let zero = _mm_setzero_si128();
    let mut even = [zero; 2 * PAIRS + 1];
    let mut odd = [zero; 2 * PAIRS];
    for s in 0..pa {
        let x = load(&ab, s);
        for t in 0..pb {
            let y = load(&bb, t);
            let k = s + t;
            even[k] = _mm_xor_si128(even[k], _mm_clmulepi64_si128(x, y, 0x00));
            even[k + 1] = _mm_xor_si128(even[k + 1], _mm_clmulepi64_si128(x, y, 0x11));
            let cross = _mm_xor_si128(_mm_clmulepi64_si128(x, y, 0x01), _mm_clmulepi64_si128(x, y, 0x10));
            odd[k] = _mm_xor_si128(odd[k], cross);
        }
    }
    let mut limbs = [0u64; 4 * PAIRS + 2];
    for k in 0..pa + pb {
        let mut e = [0u64; 2];
        let mut o = [0u64; 2];
        _mm_storeu_si128(e.as_mut_ptr().cast(), even[k]);
        _mm_storeu_si128(o.as_mut_ptr().cast(), odd[k]);
        limbs[2 * k] ^= e[0];
        limbs[2 * k + 1] ^= e[1] ^ o[0];
        limbs[2 * k + 2] ^= o[1];
    }
    let len = out.len();
    out.copy_from_slice(&limbs[..len]);
}

#[cfg(target_arch = "x86_64")]
struct Vpclmul;

#[cfg(target_arch = "x86_64")]
impl Kernel for Vpclmul {
    fn schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
        // SAFETY: this kernel is only selected after runtime detection.
        unsafe { schoolbook_vpclmul(a, b, out) }
    }
}

/// Output-stationary variant of [`schoolbook_pclmul`] on 512-bit registers:
/// each accumulator holds four consecutive pair offsets `k0..k0 + 4`, fed by
/// one broadcast pair of `a` against four pairs of a zero-padded `b`.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f,vpclmulqdq,pclmulqdq")]
unsafe fn schoolbook_vpclmul(a: &[u64], b: &[u64], out: &mut [u64]) {
    use std::arch::x86_64::*;
    const PAIRS: usize = KARATSUBA_CUTOFF / 2;
    debug_assert!(a.len() <= KARATSUBA_CUTOFF && b.len() <= KARATSUBA_CUTOFF);
    if a.is_empty() || b.is_empty() {
        out.fill(0);
        return;
    }
    let mut ab = [0u64; KARATSUBA_CUTOFF];
    ab[..a.len()].copy_from_slice(a);
    // pair index t of b lives at pair PAIRS + t; zeros on both sides
    let mut bpad = [0u64; 2 * (3 * PAIRS + 4)];
    bpad[2 * PAIRS..2 * PAIRS + b.len()].copy_from_slice(b);
    let pa = a.len().div_ceil(2);
    let pb = b.len().div_ceil(2);
    let mut limbs = [0u64; 2 * (2 * PAIRS + 4) + 4];
    let mut k0 = 0;
    while k0 + 1 < pa + pb {
        let mut even = _mm512_setzero_si512();
        let mut high = _mm512_setzero_si512();
        let mut odd = _mm512_setzero_si512();
        let lo_s = (k0 + 1).saturating_sub(pb);
        let hi_s = (pa - 1).min(k0 + 3);
        for s in lo_s..=hi_s {
            let x = _mm512_broadcast_i32x4(_mm_loadu_si128(ab.as_ptr().add(2 * s).cast()));
            let y = _mm512_loadu_si512(bpad.as_ptr().add(2 * (PAIRS + k0 - s)).cast());
            even = _mm512_xor_si512(even, _mm512_clmulepi64_epi128(x, y, 0x00));
            high = _mm512_xor_si512(high, _mm512_clmulepi64_epi128(x, y, 0x11));
            let cross = _mm512_xor_si512(_mm512_clmulepi64_epi128(x, y, 0x01), _mm512_clmulepi64_epi128(x, y, 0x10));
            odd = _mm512_xor_si512(odd, cross);
        }
        let mut e = [0u64; 8];
        let mut h = [0u64; 8];
        let mut o = [0u64; 8];
        _mm512_storeu_si512(e.as_mut_ptr().cast(), even);
        _mm512_storeu_si512(h.as_mut_ptr().cast(), high);
        _mm512_storeu_si512(o.as_mut_ptr().cast(), odd);
        for l in 0..4 {
            let base = 2 * (k0 + l);
            limbs[base] ^= e[2 * l];
            limbs[base + 1] ^= e[2 * l + 1] ^ o[2 * l];
            limbs[base + 2] ^= o[2 * l + 1] ^ h[2 * l];
            limbs[base + 3] ^= h[2 * l + 1];
        }
        k0 += 4;
    }
    let len = out.len();
    out.copy_from_slice(&limbs[..len]);
}

/// Scratch limbs needed by [`karatsuba`] on `n`-limb operands.
fn scratch_len(n: usize) -> usize {
    if n <= KARATSUBA_CUTOFF {
        0
    } else {
        let hi = n - n / 2;
        4 * hi + scratch_len(hi)
    }
}

/// `out = a * b` for equal-length operands; `out` has `2 n` limbs.
fn karatsuba<K: Kernel>(a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    if n <= KARATSUBA_CUTOFF {
        K::schoolbook(a, b, out);
        return;
    }
    let h = n / 2;
    let hi = n - h;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    {
        let (lo_out, hi_out) = out.split_at_mut(2 * h);
        karatsuba::<K>(a0, b0, lo_out, scratch);
        karatsuba::<K>(a1, b1, hi_out, scratch);
    }
    let (sa, rest) = scratch.split_at_mut(hi);
    let (sb, rest) = rest.split_at_mut(hi);
    let (mid, rest) = rest.split_at_mut(2 * hi);
    sa.copy_from_slice(a1);
    sb.copy_from_slice(b1);
    for (s, x) in sa.iter_mut().zip(a0) {
        *s ^= x;
    }
    for (s, x) in sb.iter_mut().zip(b0) {
        *s ^= x;
    }
    karatsuba::<K>(sa, sb, mid, rest);
    // mid becomes (a0 + a1)(b0 + b1) + a0 b0 + a1 b1 = a0 b1 + a1 b0
    let (p0, p2) = out.split_at(2 * h);
    for (m, x) in mid.iter_mut().zip(p0) {
        *m ^= x;
    }
    for (m, x) in mid.iter_mut().zip(p2) {
        *m ^= x;
    }
    for (o, x) in out[h..].iter_mut().zip(mid.iter()) {
        *o ^= x;
    }
}

/// `a * b` for arbitrary lengths. The longer operand is cut into pieces the
/// size of the shorter one.
fn product<K: Kernel>(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let s = short.len();
    if s == 0 {
        return out;
    }
    let piece_len = s.max(KARATSUBA_CUTOFF.min(long.len()));
    let mut tmp = vec![0u64; s + piece_len];
    let mut scratch = vec![0u64; scratch_len(s)];
    for (k, piece) in long.chunks(piece_len).enumerate() {
        let at = k * piece_len;
        let width = s + piece.len();
        if s <= KARATSUBA_CUTOFF && piece.len() <= KARATSUBA_CUTOFF {
            K::schoolbook(short, piece, &mut tmp[..width]);
        } else if piece.len() == s {
            karatsuba::<K>(short, piece, &mut tmp[..width], &mut scratch);
        } else {
            let p = product::<K>(short, piece);
            tmp[..width].copy_from_slice(&p);
        }
        for (o, x) in out[at..at + width].iter_mut().zip(&tmp[..width]) {
            *o ^= x;
        }
    }
    out
}

#[cfg(target_arch = "x86_64")]
fn has_pclmul() -> bool {
    std::arch::is_x86_feature_detected!("pclmulqdq")
}

#[cfg(target_arch = "x86_64")]
fn has_vpclmul() -> bool {
    std::arch::is_x86_feature_detected!("avx512f") && std::arch::is_x86_feature_detected!("vpclmulqdq")
}

/// Full product of two limb slices; the result has `a.len() + b.len()` limbs.
pub fn mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    #[cfg(target_arch = "x86_64")]
    {
        if has_vpclmul() {
            return product::<Vpclmul>(a, b);
        }
        if has_pclmul() {
            return product::<Pclmul>(a, b);
        }
    }
    product::<Soft>(a, b)
}

/// Same product using the portable kernel only.
pub fn mul_portable(a: &[u64], b: &[u64]) -> Vec<u64> {
    product::<Soft>(a, b)
}
