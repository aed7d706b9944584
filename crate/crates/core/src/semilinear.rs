//! The ring `Z/2[r]`, its elements `F = r(r+1)^5` and `G = r^5(r+1)`, and
//! the semi-linear operator `U` (`U(G f) = F U(f)`).
//!
//! `Z/2[r]` is free over `Z/2[G]` on `1, r, ..., r^5`. Decomposition uses
//! the rewriting rule `r^6 = G + r^5`, carried out as repeated exact
//! division by `G = r^5 (r + 1)`.

use crate::error::{Error, Result};
use crate::gf2poly::Gf2Poly;

/// An element of `Z/2[r]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PolyInR(pub Gf2Poly);

/// `F = r(r+1)^5 = r^6 + r^5 + r^2 + r`.
pub const F_WORD: u64 = 0b110_0110;
/// `G = r^5(r+1) = r^6 + r^5`.
pub const G_WORD: u64 = 0b110_0000;
/// `F + G = r^2 + r`.
pub const FG_SUM_WORD: u64 = 0b110;

/// Images `U(r^i)` for `i = 0..6`: `1, r, r^2, r^3+r^2+r, r^4, r^5+r^4+r`.
pub const U_IMAGES: [u64; 6] = [0b1, 0b10, 0b100, 0b1110, 0b1_0000, 0b11_0010];

impl PolyInR {
    pub fn new(p: Gf2Poly) -> Self {
        Self(p)
    }

    pub fn f() -> Self {
        Self(Gf2Poly::from_limbs(vec![F_WORD]))
    }

    pub fn g() -> Self {
        Self(Gf2Poly::from_limbs(vec![G_WORD]))
    }

    /// `r^2 + r`, which equals `F + G`.
    pub fn r2_plus_r() -> Self {
        Self(Gf2Poly::from_limbs(vec![FG_SUM_WORD]))
    }

    pub fn r_pow(k: usize) -> Self {
        Self(Gf2Poly::monomial(k))
    }

    pub fn poly(&self) -> &Gf2Poly {
        &self.0
    }

    pub fn into_poly(self) -> Gf2Poly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &PolyInR) -> PolyInR {
        PolyInR(&self.0 + &other.0)
    }

    pub fn mul(&self, other: &PolyInR) -> PolyInR {
        PolyInR(self.0.mul(&other.0))
    }

    pub fn pow(&self, k: u64) -> PolyInR {
        PolyInR(self.0.pow(k))
    }

    /// `h(F)` for a polynomial `h` in the formal variable `F`.
    pub fn from_f_poly(h: &Gf2Poly) -> PolyInR {
        PolyInR(h.compose(&PolyInR::f().0))
    }

    /// `h(G)` for a polynomial `h` in the formal variable `G`.
    pub fn from_g_poly(h: &Gf2Poly) -> PolyInR {
        PolyInR(h.compose(&PolyInR::g().0))
    }
}

/// Checks the defining identities `F + G = r^2 + r` and `(F+G)^6 + FG = 0`.
pub fn check_constants() -> Result<()> {
    let (f, g) = (PolyInR::f(), PolyInR::g());
    let r = PolyInR(Gf2Poly::monomial(1));
    let f_def = r.mul(&PolyInR(Gf2Poly::from_limbs(vec![0b11])).pow(5));
    let g_def = r.pow(5).mul(&PolyInR(Gf2Poly::from_limbs(vec![0b11])));
    if f != f_def || g != g_def {
        return Err(Error::Config("F or G constant does not match its definition".into()));
    }
    let sum = f.add(&g);
    if sum != PolyInR::r2_plus_r() {
        return Err(Error::Config("F + G != r^2 + r".into()));
    }
    if !sum.pow(6).add(&f.mul(&g)).is_zero() {
        return Err(Error::Config("(F+G)^6 + FG != 0".into()));
    }
    Ok(())
}

/// Coordinates of an element of `Z/2[r]` over the `Z/2[G]`-basis
/// `1, r, ..., r^5`: the element is `sum_i a[i](G) r^i`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GCoords {
    pub a: [Gf2Poly; 6],
}

impl GCoords {
    pub fn recompose(&self) -> PolyInR {
        let top = self.a.iter().filter_map(|c| c.degree()).max();
        let mut acc = Gf2Poly::zero();
        if let Some(top) = top {
            for k in (0..=top).rev() {
                acc = acc.mul_word(G_WORD);
                let digit = self.digit(k);
                if digit != 0 {
                    acc.add_assign_ref(&Gf2Poly::from_limbs(vec![digit]));
                }
            }
        }
        PolyInR(acc)
    }

    fn digit(&self, k: usize) -> u64 {
        (0..6).fold(0, |d, i| d | ((self.a[i].bit(k) as u64) << i))
    }
}

/// One step of `f = q G + rem` with `deg rem < 6`.
///
/// With `G = r^5 (r+1)`: the low five bits of `f` belong to `rem`, and
/// `rem`'s `r^5` coefficient `c` is whatever makes `(f >> 5) + c`
/// vanish at `r = 1`; then `q` is the exact quotient of that by `r + 1`,
/// i.e. its prefix XOR from the bottom.
fn div_by_g(f: &Gf2Poly) -> (Gf2Poly, u64) {
    let low = f.limbs().first().copied().unwrap_or(0) & 0x1f;
    let mut h = f.shr(5);
    let c = h.parity() as u64;
    if c == 1 {
        h.flip_bit(0);
    }
    let mut limbs = h.limbs().to_vec();
    let mut carry = 0u64;
    for l in limbs.iter_mut() {
        let mut x = *l;
        x ^= x << 1;
        x ^= x << 2;
        x ^= x << 4;
        x ^= x << 8;
        x ^= x << 16;
        x ^= x << 32;
        x ^= carry;
        carry = if x >> 63 == 1 { u64::MAX } else { 0 };
        *l = x;
    }
    debug_assert_eq!(carry, 0, "h(1) = 0 forces the prefix XOR to end at zero");
    (Gf2Poly::from_limbs(limbs), low | (c << 5))
}

/// Base-`G` digits: entry `k` holds bit `i` set iff `r^i G^k` occurs.
fn g_digits(f: &Gf2Poly) -> Vec<u64> {
    let mut digits = Vec::new();
    let mut cur = f.clone();
    while !cur.is_zero() {
        let (q, rem) = div_by_g(&cur);
        digits.push(rem);
        cur = q;
    }
    digits
}

pub fn g_basis_decompose(f: &PolyInR) -> GCoords {
    let digits = g_digits(&f.0);
    let mut a: [Vec<u64>; 6] = Default::default();
    for v in a.iter_mut() {
        *v = vec![0u64; digits.len().div_ceil(64)];
    }
    for (k, &d) in digits.iter().enumerate() {
        for (i, coord) in a.iter_mut().enumerate() {
            if d >> i & 1 == 1 {
                coord[k / 64] |= 1u64 << (k % 64);
            }
        }
    }
    GCoords {
        a: a.map(Gf2Poly::from_limbs),
    }
}

/// `U(f) = sum_i a_i(F) U(r^i)`, evaluated by Horner's scheme in `F`.
pub fn apply_u(f: &PolyInR) -> PolyInR {
    let mut table = [0u64; 64];
    for (mask, slot) in table.iter_mut().enumerate() {
        *slot = (0..6)
            .filter(|i| mask >> i & 1 == 1)
            .fold(0, |acc, i| acc ^ U_IMAGES[i]);
    }
    let digits = g_digits(&f.0);
    let mut acc = Gf2Poly::zero();
    for &d in digits.iter().rev() {
        acc = acc.mul_word(F_WORD);
        let w = table[d as usize];
        if w != 0 {
            acc.add_assign_ref(&Gf2Poly::from_limbs(vec![w]));
        }
    }
    PolyInR(acc)
}

/// An element `(r^2 + r) g(r^2)` of `M(odd)`, stored by `g`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MOddElem {
    pub g: Gf2Poly,
}

/// Conversion direction for [`modd_convert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModdDirection {
    ToG,
    FromG,
}

impl MOddElem {
    pub fn new(g: Gf2Poly) -> Self {
        Self { g }
    }

    /// `(r^2 + r) g(r^2)`.
    pub fn to_r(&self) -> PolyInR {
        let sq = self.g.compose_square();
        let mut out = sq.shl(2);
        out.add_shifted(&sq, 1);
        PolyInR(out)
    }

    /// Recovers `g` from `(r^2 + r) g(r^2)`; the `r`-polynomial must have
    /// zero constant term and equal coefficients at `r^{2e+1}`, `r^{2e+2}`.
    pub fn from_r(f: &PolyInR) -> Result<MOddElem> {
        if f.0.bit(0) {
            return Err(Error::NotInMOdd(f.0.format_exponents()));
        }
        let x = f.0.shr(1);
        for &l in x.limbs() {
            if (l & 0x5555_5555_5555_5555) << 1 != l & 0xAAAA_AAAA_AAAA_AAAA {
                return Err(Error::NotInMOdd(f.0.format_exponents()));
            }
        }
        Ok(MOddElem { g: x.even_part() })
    }
}

/// Either direction of the bijection `g <-> (r^2 + r) g(r^2)`, on raw
/// polynomials.
pub fn modd_convert(x: &Gf2Poly, direction: ModdDirection) -> Result<Gf2Poly> {
    match direction {
        ModdDirection::FromG => Ok(MOddElem::new(x.clone()).to_r().into_poly()),
        ModdDirection::ToG => MOddElem::from_r(&PolyInR(x.clone())).map(|m| m.g),
    }
}

/// `C_n` read off from `(U + I)((r^2 + r) r^{2n}) = (r^2 + r) C_n(r^2)`.
pub fn u_plus_i_on_modd(n: usize) -> Result<Gf2Poly> {
    let f = MOddElem::new(Gf2Poly::monomial(n)).to_r();
    let image = apply_u(&f).add(&f);
    MOddElem::from_r(&image)
        .map(|m| m.g)
        .map_err(|_| Error::ShapeViolation { n })
}

/// `T(F^n)` for `n` up to a bound, as polynomials in the variable `F`.
///
/// Built from `T(1), ..., T(F^5) = 0, 0, 0, 0, 0, F` and the recursion
/// `P_{n+6} = F^2 P_{n+4} + F^4 P_{n+2} + F^6 P_n + F P_{n+1}`.
#[derive(Debug, Clone)]
pub struct TTable {
    values: Vec<Gf2Poly>,
}

impl TTable {
    pub fn build(bound: usize) -> TTable {
        let mut values: Vec<Gf2Poly> = Vec::with_capacity(bound.max(5) + 1);
        for n in 0..=bound.max(5) {
            let v = match n {
                0..=4 => Gf2Poly::zero(),
                5 => Gf2Poly::monomial(1),
                _ => {
                    let m = n - 6;
                    let mut p = values[m + 4].shl(2);
                    p.add_shifted(&values[m + 2], 4);
                    p.add_shifted(&values[m], 6);
                    p.add_shifted(&values[m + 1], 1);
                    p
                }
            };
            values.push(v);
        }
        TTable { values }
    }

    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    /// `T(F^n)`; panics when `n` exceeds the table bound.
    pub fn get(&self, n: usize) -> &Gf2Poly {
        &self.values[n]
    }

    /// `T(h)` for `h` in `Z/2[F]`, by linearity over the table.
    pub fn apply(&self, h: &Gf2Poly) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        for n in h.iter_exponents() {
            out += &self.values[n];
        }
        out
    }
}

/// `T(h)` via the table; the table is grown to cover `deg h`.
pub fn apply_t(h: &Gf2Poly) -> Gf2Poly {
    let table = TTable::build(h.degree().unwrap_or(0));
    table.apply(h)
}

/// `T(h) = U(h(F)) + h(G)` computed from the definition, re-expressed in
/// the variable `F`. `None` if the result were outside `Z/2[F]`.
pub fn apply_t_direct(h: &Gf2Poly) -> Option<Gf2Poly> {
    let lhs = apply_u(&PolyInR::from_f_poly(h));
    let rhs = PolyInR::from_g_poly(h);
    express_in_powers(&lhs.add(&rhs).0, &PolyInR::f().0)
}

/// Writes `p = sum_k c_k base^k` by clearing the top term with the matching
/// power; requires `base` of positive degree. `None` if `p` is not a
/// polynomial in `base`.
pub fn express_in_powers(p: &Gf2Poly, base: &Gf2Poly) -> Option<Gf2Poly> {
    let b = base.degree().filter(|&b| b > 0)?;
    let mut cur = p.clone();
    let mut powers: Vec<Gf2Poly> = vec![Gf2Poly::one()];
    let mut out = Gf2Poly::zero();
    while let Some(d) = cur.degree() {
        if d % b != 0 {
            return None;
        }
        let k = d / b;
        while powers.len() <= k {
            let next = powers.last().unwrap().mul(base);
            powers.push(next);
        }
        cur += &powers[k];
        out.flip_bit(k);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(e: &[usize]) -> Gf2Poly {
        Gf2Poly::from_exponents(e.iter().copied())
    }
    fn r(e: &[usize]) -> PolyInR {
        PolyInR(p(e))
    }

    /// Naive top-down rewriting `r^m -> r^{m-1} + G r^{m-6}`, one bit at a
    /// time. `layers[k]` is the `r`-polynomial multiplying `G^k`.
    fn naive_decompose(f: &Gf2Poly) -> GCoords {
        let mut layers = vec![f.clone()];
        let mut k = 0;
        while k < layers.len() {
            while let Some(m) = layers[k].degree().filter(|&m| m >= 6) {
                layers[k].flip_bit(m);
                layers[k].flip_bit(m - 1);
                if layers.len() == k + 1 {
                    layers.push(Gf2Poly::zero());
                }
                layers[k + 1].flip_bit(m - 6);
            }
            k += 1;
        }
        let mut out = GCoords::default();
        for (k, layer) in layers.iter().enumerate() {
            for i in layer.iter_exponents() {
                out.a[i].flip_bit(k);
            }
        }
        out
    }

    #[test]
    fn constants_hold() {
        check_constants().unwrap();
    }

    #[test]
    fn decompose_examples() {
        let c = g_basis_decompose(&r(&[3]));
        assert_eq!(c.a[3], Gf2Poly::one());
        assert!(c.a.iter().enumerate().all(|(i, a)| i == 3 || a.is_zero()));

        // r^6 = G + r^5
        let c = g_basis_decompose(&r(&[6]));
        assert_eq!(c.a[5], Gf2Poly::one());
        assert_eq!(c.a[0], p(&[1]));
        assert!(c.a[1..5].iter().all(|a| a.is_zero()));

        // r^8 = r^5 + G r^2 + G r + G
        let c = g_basis_decompose(&r(&[8]));
        assert_eq!(c.a[5], Gf2Poly::one());
        for i in 0..3 {
            assert_eq!(c.a[i], p(&[1]), "a_{i}");
        }
        assert!(c.a[3].is_zero() && c.a[4].is_zero());
        assert_eq!(c.recompose(), r(&[8]));
    }

    #[test]
    fn apply_u_examples() {
        assert_eq!(apply_u(&r(&[5])), r(&[5, 4, 1]));
        assert_eq!(apply_u(&PolyInR::g()), PolyInR::f());
        // U(r^4 + r^3) = (r^2 + r)(r^2 + 1)
        assert_eq!(apply_u(&r(&[4, 3])), r(&[2, 1]).mul(&r(&[2, 0])));
        for i in 0..6 {
            assert_eq!(apply_u(&r(&[i])).0, Gf2Poly::from_limbs(vec![U_IMAGES[i]]));
        }
    }

    #[test]
    fn u_plus_i_seeds() {
        assert_eq!(u_plus_i_on_modd(0).unwrap(), Gf2Poly::zero());
        assert_eq!(u_plus_i_on_modd(1).unwrap(), Gf2Poly::one());
        assert_eq!(u_plus_i_on_modd(5).unwrap(), p(&[4, 2, 1]));
    }

    #[test]
    fn small_u_identities() {
        let s = PolyInR::r2_plus_r();
        assert_eq!(apply_u(&s), s);
        assert_eq!(apply_u(&s.pow(3)), s.pow(3));
        assert_eq!(apply_u(&s.pow(5)), s.pow(5).add(&PolyInR::f()));
        let (f, g) = (PolyInR::f(), PolyInR::g());
        for k in 1..5 {
            assert_eq!(apply_u(&f.pow(k)), g.pow(k), "U(F^{k})");
        }
        assert_eq!(apply_u(&f.pow(5)), g.pow(5).add(&f));
    }

    #[test]
    fn t_examples() {
        let t = TTable::build(40);
        assert!(t.get(2).is_zero());
        assert_eq!(t.get(5), &p(&[1]));
        // oracle: direct T = U + alpha
        let direct = apply_t_direct(&p(&[7])).unwrap();
        assert_eq!(direct, p(&[3]));
        assert_eq!(t.get(7), &p(&[3]));
        assert_eq!(apply_t(&p(&[7, 5, 2])), p(&[3, 1]));
    }

    #[test]
    fn t_table_matches_definition() {
        let t = TTable::build(120);
        for n in 0..=120 {
            assert_eq!(apply_t_direct(&p(&[n])).as_ref(), Some(t.get(n)), "T(F^{n})");
        }
    }

    #[test]
    fn modd_examples() {
        assert_eq!(modd_convert(&Gf2Poly::one(), ModdDirection::FromG).unwrap(), p(&[2, 1]));
        assert_eq!(modd_convert(&p(&[2]), ModdDirection::FromG).unwrap(), PolyInR::g().0);
        let s = PolyInR::r2_plus_r();
        let (f, g) = (PolyInR::f(), PolyInR::g());
        let u5 = s.pow(4).mul(&g).add(&s.mul(&f).mul(&g));
        assert_eq!(MOddElem::from_r(&u5).unwrap().g, p(&[5, 3]));
        assert!(matches!(
            modd_convert(&p(&[3]), ModdDirection::ToG),
            Err(Error::NotInMOdd(_))
        ));
        assert!(modd_convert(&p(&[0, 1, 2]), ModdDirection::ToG).is_err());
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Gf2Poly> {
        prop::collection::vec(0..=max_deg, 0..120).prop_map(Gf2Poly::from_exponents)
    }

    proptest! {
        #[test]
        fn decompose_matches_naive_and_recomposes(f in arb_poly(90)) {
            let c = g_basis_decompose(&PolyInR(f.clone()));
            prop_assert_eq!(c.recompose().0, f.clone());
            prop_assert_eq!(c, naive_decompose(&f));
        }

        #[test]
        fn recompose_on_large_inputs(f in arb_poly(3000)) {
            prop_assert_eq!(g_basis_decompose(&PolyInR(f.clone())).recompose().0, f);
        }

        #[test]
        fn u_is_semilinear(f in arb_poly(600)) {
            let f = PolyInR(f);
            prop_assert_eq!(apply_u(&PolyInR::g().mul(&f)), PolyInR::f().mul(&apply_u(&f)));
        }

        #[test]
        fn u_stabilizes_modd(g in arb_poly(400)) {
            let f = MOddElem::new(g).to_r();
            prop_assert!(MOddElem::from_r(&apply_u(&f)).is_ok());
        }

        #[test]
        fn modd_round_trip(g in arb_poly(2000)) {
            let m = MOddElem::new(g);
            prop_assert_eq!(MOddElem::from_r(&m.to_r()).unwrap(), m);
        }
    }
}
