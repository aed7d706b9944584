//! Dense bit-packed polynomials and truncated power series over GF(2).
//!
//! [`Gf2Poly`] stores coefficients as little-endian `u64` limbs, bit `e`
//! being the coefficient of `t^e`. The limb vector carries no trailing zero
//! limbs, so equality is structural and the zero polynomial is the empty
//! vector. The same type carries elements of `Z/2[t]`, `Z/2[r]`, `Z/2[F]`
//! and `Z/2[G]`; which variable is meant is fixed by context.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

mod codec;
pub mod mul;
mod series;

pub use codec::SeriesRecord;
pub use series::Gf2Series;

const W: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    limbs: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `t^e`.
    pub fn monomial(e: usize) -> Self {
        let mut limbs = vec![0u64; e / W + 1];
        limbs[e / W] = 1u64 << (e % W);
        Self { limbs }
    }

    /// Builds a polynomial from limbs, dropping trailing zero limbs.
    pub fn from_limbs(mut limbs: Vec<u64>) -> Self {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Self { limbs }
    }

    /// Sum of `t^e` over the given exponents. Repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Self::zero();
        for e in exps {
            p.flip_bit(e);
        }
        p
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial (degree minus infinity).
    pub fn degree(&self) -> Option<usize> {
        let last = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * W + (63 - last.leading_zeros() as usize))
    }

    /// `true` when the degree is at most `bound`; the zero polynomial
    /// satisfies every bound, including negative ones.
    pub fn degree_at_most(&self, bound: i64) -> bool {
        match self.degree() {
            None => true,
            Some(d) => (d as i64) <= bound,
        }
    }

    /// Index of the lowest set coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.limbs
            .iter()
            .enumerate()
            .find(|(_, &l)| l != 0)
            .map(|(i, l)| i * W + l.trailing_zeros() as usize)
    }

    pub fn bit(&self, e: usize) -> bool {
        self.limbs
            .get(e / W)
            .is_some_and(|&l| (l >> (e % W)) & 1 == 1)
    }

    pub fn flip_bit(&mut self, e: usize) {
        let i = e / W;
        if i >= self.limbs.len() {
            self.limbs.resize(i + 1, 0);
        }
        self.limbs[i] ^= 1u64 << (e % W);
        self.normalize();
    }

    pub fn set_bit(&mut self, e: usize, value: bool) {
        if self.bit(e) != value {
            self.flip_bit(e);
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Value at `t = 1`.
    pub fn parity(&self) -> bool {
        self.weight() % 2 == 1
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        self.iter_exponents().collect()
    }

    pub fn iter_exponents(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.limbs.iter().enumerate().flat_map(|(i, &l)| {
            let mut l = l;
            let mut out = Vec::with_capacity(l.count_ones() as usize);
            while l != 0 {
                out.push(i * W + l.trailing_zeros() as usize);
                l &= l - 1;
            }
            out.into_iter()
        })
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    /// `self ^= other * t^shift`.
    pub fn add_shifted(&mut self, other: &Gf2Poly, shift: usize) {
        if other.is_zero() {
            return;
        }
        let (ws, bs) = (shift / W, shift % W);
        let need = other.limbs.len() + ws + 1;
        if self.limbs.len() < need {
            self.limbs.resize(need, 0);
        }
        if bs == 0 {
            for (k, &l) in other.limbs.iter().enumerate() {
                self.limbs[ws + k] ^= l;
            }
        } else {
            for (k, &l) in other.limbs.iter().enumerate() {
                self.limbs[ws + k] ^= l << bs;
                self.limbs[ws + k + 1] ^= l >> (W - bs);
            }
        }
        self.normalize();
    }

    /// `self * t^k`.
    pub fn shl(&self, k: usize) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        out.add_shifted(self, k);
        out
    }

    /// `self` divided by `t^k`, dropping the low `k` coefficients.
    pub fn shr(&self, k: usize) -> Gf2Poly {
        let (ws, bs) = (k / W, k % W);
        if ws >= self.limbs.len() {
            return Gf2Poly::zero();
        }
        let src = &self.limbs[ws..];
        let mut limbs = Vec::with_capacity(src.len());
        for i in 0..src.len() {
            let lo = src[i] >> bs;
            let hi = if bs == 0 {
                0
            } else {
                src.get(i + 1).map_or(0, |&h| h << (W - bs))
            };
            limbs.push(lo | hi);
        }
        Gf2Poly::from_limbs(limbs)
    }

    /// Keeps the coefficients of `t^e` for `e < n`.
    pub fn truncated(&self, n: usize) -> Gf2Poly {
        let mut out = self.clone();
        out.truncate(n);
        out
    }

    pub fn truncate(&mut self, n: usize) {
        let full = n / W;
        if full >= self.limbs.len() {
            return;
        }
        self.limbs.truncate(full + 1);
        let rem = n % W;
        if rem == 0 {
            self.limbs.pop();
        } else {
            self.limbs[full] &= (1u64 << rem) - 1;
        }
        self.normalize();
    }

    pub fn add_assign_ref(&mut self, other: &Gf2Poly) {
        if self.limbs.len() < other.limbs.len() {
            self.limbs.resize(other.limbs.len(), 0);
        }
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
        self.normalize();
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::zero();
        }
        let (sparse, dense) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        // Very sparse factors (F, G, r^2 + r, theta series) multiply faster
        // as a sum of shifts than through limb products.
        if sparse.weight() <= sparse.limbs.len().max(4) {
            let mut out = Gf2Poly::zero();
            out.limbs.reserve(self.limbs.len() + other.limbs.len());
            for e in sparse.iter_exponents() {
                out.add_shifted(dense, e);
            }
            return out;
        }
        Gf2Poly::from_limbs(mul::mul_limbs(&self.limbs, &other.limbs))
    }

    /// Product truncated below `t^n`.
    pub fn mul_truncated(&self, other: &Gf2Poly, n: usize) -> Gf2Poly {
        if self.is_zero() || other.is_zero() || n == 0 {
            return Gf2Poly::zero();
        }
        let (sparse, dense) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        if sparse.weight() <= sparse.limbs.len().max(4) {
            let dense = dense.truncated(n);
            let nl = n.div_ceil(W);
            let mut limbs = vec![0u64; nl + 1];
            for e in sparse.iter_exponents() {
                if e >= n {
                    break;
                }
                let (ws, bs) = (e / W, e % W);
                let avail = nl - ws;
                let src = &dense.limbs[..dense.limbs.len().min(avail)];
                if bs == 0 {
                    for (k, &l) in src.iter().enumerate() {
                        limbs[ws + k] ^= l;
                    }
                } else {
                    for (k, &l) in src.iter().enumerate() {
                        limbs[ws + k] ^= l << bs;
                        limbs[ws + k + 1] ^= l >> (W - bs);
                    }
                }
            }
            let mut out = Gf2Poly::from_limbs(limbs);
            out.truncate(n);
            return out;
        }
        let a = self.truncated(n);
        let b = other.truncated(n);
        let mut out = Gf2Poly::from_limbs(mul::mul_limbs(&a.limbs, &b.limbs));
        out.truncate(n);
        out
    }

    /// Product with a polynomial of degree below 64 given as a single limb.
    pub fn mul_word(&self, w: u64) -> Gf2Poly {
        if w == 0 || self.is_zero() {
            return Gf2Poly::zero();
        }
        let mut limbs = vec![0u64; self.limbs.len() + 1];
        for (i, &l) in self.limbs.iter().enumerate() {
            let (lo, hi) = mul::clmul(l, w);
            limbs[i] ^= lo;
            limbs[i + 1] ^= hi;
        }
        Gf2Poly::from_limbs(limbs)
    }

    /// Coefficients at even positions `2e`, relocated to `e`.
    pub fn even_part(&self) -> Gf2Poly {
        let mut limbs = Vec::with_capacity(self.limbs.len().div_ceil(2));
        for pair in self.limbs.chunks(2) {
            let lo = mul::compress32(pair[0]) as u64;
            let hi = pair.get(1).map_or(0, |&h| mul::compress32(h) as u64);
            limbs.push(lo | (hi << 32));
        }
        Gf2Poly::from_limbs(limbs)
    }

    /// Frobenius: every exponent doubled.
    pub fn square(&self) -> Gf2Poly {
        let mut limbs = Vec::with_capacity(2 * self.limbs.len());
        for &l in &self.limbs {
            limbs.push(mul::spread32(l as u32));
            limbs.push(mul::spread32((l >> 32) as u32));
        }
        Gf2Poly::from_limbs(limbs)
    }

    /// `g(t^2)`. Over GF(2) this coincides with `g^2`, but it is computed
    /// here by relocating each coefficient rather than by squaring.
    pub fn compose_square(&self) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        if let Some(d) = self.degree() {
            out.limbs = vec![0u64; (2 * d) / W + 1];
            for e in self.iter_exponents() {
                out.limbs[(2 * e) / W] |= 1u64 << ((2 * e) % W);
            }
        }
        out
    }

    /// Inverse of [`compose_square`](Self::compose_square): `Some(h)` with
    /// `h(t^2) = self` when every exponent is even.
    pub fn uncompose_square(&self) -> Option<Gf2Poly> {
        if self.limbs.iter().any(|l| l & 0xAAAA_AAAA_AAAA_AAAA != 0) {
            return None;
        }
        Some(Gf2Poly::from_exponents(
            self.iter_exponents().map(|e| e / 2),
        ))
    }

    pub fn pow(&self, mut k: u64) -> Gf2Poly {
        let mut base = self.clone();
        let mut acc = Gf2Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Euclidean division: `(q, r)` with `self = q * divisor + r` and
    /// `deg r < deg divisor`. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut q = Gf2Poly::zero();
        while let Some(d) = rem.degree() {
            if d < dd {
                break;
            }
            q.flip_bit(d - dd);
            rem.add_shifted(divisor, d - dd);
        }
        (q, rem)
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Gf2Poly) -> Option<Gf2Poly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// `self(a)`: Horner evaluation at another polynomial.
    pub fn compose(&self, a: &Gf2Poly) -> Gf2Poly {
        let mut acc = Gf2Poly::zero();
        let Some(d) = self.degree() else {
            return acc;
        };
        for e in (0..=d).rev() {
            acc = acc.mul(a);
            if self.bit(e) {
                acc.flip_bit(0);
            }
        }
        acc
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({})", self.format_exponents())
    }
}

impl fmt::Display for Gf2Poly {
    /// Descending sum of monomials in `t`, e.g. `t^4 + t^2 + t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .iter_exponents()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;
    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for Gf2Poly {
    type Output = Gf2Poly;
    fn add(mut self, rhs: Gf2Poly) -> Gf2Poly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl AddAssign<&Gf2Poly> for Gf2Poly {
    fn add_assign(&mut self, rhs: &Gf2Poly) {
        self.add_assign_ref(rhs);
    }
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;
    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        Gf2Poly::mul(self, rhs)
    }
}

/// Binary polynomial operations exposed by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Square,
}

/// `op(a, b)`; `Square` ignores `b`.
pub fn poly_arith(a: &Gf2Poly, b: &Gf2Poly, op: PolyOp) -> Gf2Poly {
    match op {
        PolyOp::Add => a + b,
        PolyOp::Mul => a.mul(b),
        PolyOp::Square => a.square(),
    }
}
