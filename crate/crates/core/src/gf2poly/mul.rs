//! Word-level carry-less multiplication.
//!
//! Products are computed on little-endian `u64` limb slices. Small operands
//! use a schoolbook loop over 64x64 carry-less products; above
//! [`KARATSUBA_THRESHOLD`] limbs the operands are split recursively.

/// Limb count (of the shorter operand) from which Karatsuba splitting is used.
pub const KARATSUBA_THRESHOLD: usize = 24;

/// Portable 64x64 -> 128 carry-less product, 4-bit window.
#[inline]
pub fn clmul_portable(a: u64, b: u64) -> (u64, u64) {
    let mut table = [0u128; 16];
    let b = b as u128;
    for k in 1..16usize {
        let mut v = 0u128;
        for bit in 0..4 {
            if k >> bit & 1 == 1 {
                v ^= b << bit;
            }
        }
        table[k] = v;
    }
    let mut acc = 0u128;
    for nib in (0..16).rev() {
        acc <<= 4;
        acc ^= table[((a >> (4 * nib)) & 0xf) as usize];
    }
    (acc as u64, (acc >> 64) as u64)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn clmul_x86(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::*;
    let va = _mm_set_epi64x(0, a as i64);
    let vb = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(va, vb, 0x00);
    let lo = _mm_cvtsi128_si64(r) as u64;
    let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
    (lo, hi)
}

#[inline]
fn has_hw_clmul() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        use std::sync::OnceLock;
        static HW: OnceLock<bool> = OnceLock::new();
        *HW.get_or_init(|| is_x86_feature_detected!("pclmulqdq"))
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// 64x64 -> 128 carry-less product, `(low, high)`.
#[inline]
pub fn clmul(a: u64, b: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    {
        if has_hw_clmul() {
            // SAFETY: the pclmulqdq feature was detected at runtime.
            return unsafe { clmul_x86(a, b) };
        }
    }
    clmul_portable(a, b)
}

/// `out ^= a * b`, with `out.len() >= a.len() + b.len()`.
fn schoolbook_acc(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let (lo, hi) = clmul(x, y);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

/// `out ^= a * b` for equal-length operands.
fn karatsuba_acc(a: &[u64], b: &[u64], out: &mut [u64]) {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    if n < KARATSUBA_THRESHOLD {
        schoolbook_acc(a, b, out);
        return;
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let hi_len = n - h;

    // z0 = a0*b0, z2 = a1*b1, z1 = (a0+a1)(b0+b1) + z0 + z2
    let mut z0 = vec![0u64; 2 * h];
    karatsuba_acc(a0, b0, &mut z0);
    let mut z2 = vec![0u64; 2 * hi_len];
    karatsuba_acc(a1, b1, &mut z2);

    let mut sa = a1.to_vec();
    let mut sb = b1.to_vec();
    for k in 0..h {
        sa[k] ^= a0[k];
        sb[k] ^= b0[k];
    }
    let mut z1 = vec![0u64; 2 * hi_len];
    karatsuba_acc(&sa, &sb, &mut z1);
    for (k, v) in z0.iter().enumerate() {
        z1[k] ^= v;
    }
    for (k, v) in z2.iter().enumerate() {
        z1[k] ^= v;
    }

    for (k, v) in z0.iter().enumerate() {
        out[k] ^= v;
    }
    for (k, v) in z1.iter().enumerate() {
        out[h + k] ^= v;
    }
    for (k, v) in z2.iter().enumerate() {
        out[2 * h + k] ^= v;
    }
}

/// Full product of two limb slices; result has `a.len() + b.len()` limbs.
pub fn mul_limbs(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    if a.is_empty() || b.is_empty() {
        return out;
    }
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.len() < KARATSUBA_THRESHOLD {
        schoolbook_acc(short, long, &mut out);
        return out;
    }
    // Chop the longer operand into blocks of the shorter length.
    let s = short.len();
    let mut offset = 0;
    while offset < long.len() {
        let end = (offset + s).min(long.len());
        let block = &long[offset..end];
        if block.len() == s {
            karatsuba_acc(short, block, &mut out[offset..]);
        } else {
            schoolbook_acc(block, short, &mut out[offset..]);
        }
        offset = end;
    }
    out
}

/// Spread the low 32 bits of `x` to the even bit positions of a `u64`.
#[inline]
pub fn spread32(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// Inverse of [`spread32`]: gathers the even bit positions of `x`.
#[inline]
pub fn compress32(x: u64) -> u32 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}
