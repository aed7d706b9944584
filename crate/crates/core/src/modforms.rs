//! Power-series side: theta series, the Hecke operators `T_p`, `U_5`, the
//! projection `pr`, and the passage between `r`-polynomials and series.
//!
//! Every series carries its precision, and each operator narrows it to what
//! its input determines. [`PrecisionPolicy`] computes backwards from the
//! degree to be reconstructed.

use crate::error::{Error, Result};
use crate::gf2poly::{Gf2Poly, Gf2Series};
use crate::semilinear::{MOddElem, PolyInR};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    /// `r = sum_{n>0} x^{n^2} + x^{2n^2} + x^{5n^2} + x^{10n^2}`.
    R,
    /// `sum_{n odd} x^{n^2}`.
    F,
    /// `sum_{n odd} x^{5n^2}`.
    G,
    /// `sum_{(n,10)=1} x^{n^2}`.
    D,
}

/// Exact truncation to precision `precision` of the given theta series.
pub fn gen_theta(kind: ThetaKind, precision: usize) -> Gf2Series {
    let mut bits = Gf2Poly::zero();
    let mut put = |e: usize| {
        if e < precision {
            bits.flip_bit(e);
        }
    };
    let mut n = 1usize;
    while n * n < precision {
        let sq = n * n;
        match kind {
            ThetaKind::R => {
                for c in [1, 2, 5, 10] {
                    put(c * sq);
                }
            }
            ThetaKind::F if n % 2 == 1 => put(sq),
            ThetaKind::G if n % 2 == 1 => put(5 * sq),
            ThetaKind::D if n % 2 == 1 && !n.is_multiple_of(5) => put(sq),
            _ => {}
        }
        n += 1;
    }
    Gf2Series::new(bits, precision)
}

/// Input precision needed to reconstruct `g`-degree `dmax` after applying
/// operators that divide precision by at most `max_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub dmax: usize,
    pub max_p: usize,
    pub precision: usize,
}

impl PrecisionPolicy {
    pub fn new(dmax: usize, max_p: usize) -> Self {
        let max_p = max_p.max(1);
        Self {
            dmax,
            max_p,
            precision: max_p * (2 * dmax + 3),
        }
    }

    /// Raises the precision to `p` if that is larger; never lowers it.
    pub fn with_override(mut self, p: Option<usize>) -> Self {
        if let Some(p) = p {
            self.precision = self.precision.max(p);
        }
        self
    }
}

pub fn is_hecke_prime(p: u64) -> bool {
    p > 2 && p != 5 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `out(n) = c(pn) + c(n/p)`, the second term present only when `p | n`.
pub fn hecke_tp(f: &Gf2Series, p: u64) -> Result<Gf2Series> {
    if !is_hecke_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let p = p as usize;
    let prec = f.precision().saturating_sub(1) / p + 1;
    let mut out = Gf2Poly::zero();
    for e in f.bits().iter_exponents() {
        if e % p == 0 && e / p < prec {
            out.flip_bit(e / p);
        }
        if e * p < prec {
            out.flip_bit(e * p);
        }
    }
    Ok(Gf2Series::new(out, prec))
}

/// `out(n) = c(5n)`.
pub fn u5(f: &Gf2Series) -> Gf2Series {
    let prec = f.precision().saturating_sub(1) / 5 + 1;
    let bits = Gf2Poly::from_exponents(
        f.bits()
            .iter_exponents()
            .filter(|e| e % 5 == 0)
            .map(|e| e / 5),
    );
    Gf2Series::new(bits, prec)
}

/// Drops the coefficients at indices divisible by 5.
pub fn pr(f: &Gf2Series) -> Gf2Series {
    let bits = Gf2Poly::from_exponents(f.bits().iter_exponents().filter(|e| e % 5 != 0));
    Gf2Series::new(bits, f.precision())
}

/// `h(r)` modulo `x^prec`, where `r` holds at least `prec` known bits.
///
/// Splits `h(t) = E(t^2) + t O(t^2)`, so `h(r) = E(r)^2 + r O(r)^2` and the
/// halves are needed only to precision `ceil(prec / 2)`.
fn compose_series(h: &Gf2Poly, r: &Gf2Poly, prec: usize) -> Gf2Poly {
    match h.degree() {
        None => return Gf2Poly::zero(),
        _ if prec == 0 => return Gf2Poly::zero(),
        Some(0) => return Gf2Poly::one(),
        // r has valuation 1
        _ if prec == 1 => {
            return if h.bit(0) { Gf2Poly::one() } else { Gf2Poly::zero() };
        }
        _ => {}
    }
    let half = prec.div_ceil(2);
    let even = compose_series(&h.even_part(), r, half).square();
    let odd = compose_series(&h.shr(1).even_part(), r, half).square();
    let mut out = r.mul_truncated(&odd, prec);
    out += &even.truncated(prec);
    out
}

/// `f(r(x))` to precision `precision`.
pub fn series_of_poly(f: &PolyInR, precision: usize) -> Gf2Series {
    let r = gen_theta(ThetaKind::R, precision);
    Gf2Series::new(compose_series(f.poly(), r.bits(), precision), precision)
}

/// `(r^2 + r) g(r)^2` to precision `precision`; equal to the series of
/// [`MOddElem::to_r`].
pub fn series_of_modd(m: &MOddElem, precision: usize) -> Gf2Series {
    let r = gen_theta(ThetaKind::R, precision);
    let inner = compose_series(&m.g, r.bits(), precision.div_ceil(2)).square();
    let r2r = &r.bits().square() + r.bits();
    Gf2Series::new(r2r.mul_truncated(&inner, precision), precision)
}

/// Recovers `g`-polynomials from series in the span of the basis
/// `b_j = (r^2 + r) r^{2j}`, whose valuations are exactly `2j + 1`.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    dmax: usize,
    precision: usize,
    basis: Vec<Gf2Poly>,
}

impl Reconstructor {
    /// Basis series `b_0..b_dmax` to precision `precision`.
    pub fn new(dmax: usize, precision: usize) -> Self {
        let r = gen_theta(ThetaKind::R, precision);
        let r2 = r.bits().square().truncated(precision);
        let mut basis = Vec::with_capacity(dmax + 1);
        let mut cur = (&r2 + r.bits()).truncated(precision);
        for j in 0..=dmax {
            if 2 * j + 1 >= precision {
                break;
            }
            basis.push(cur.clone());
            cur = cur.mul_truncated(&r2, precision);
        }
        Self {
            dmax,
            precision,
            basis,
        }
    }

    pub fn dmax(&self) -> usize {
        self.dmax
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// `g` with `series_of_modd(g) = s` to the common precision.
    ///
    /// Errors: `NotInMOddSpan` at an even residual valuation;
    /// `TableTooSmall` when a term above `dmax` is needed.
    pub fn reconstruct(&self, s: &Gf2Series) -> Result<Gf2Poly> {
        let prec = s.precision().min(self.precision);
        let mut rest = s.bits().truncated(prec);
        let mut g = Gf2Poly::zero();
        while let Some(v) = rest.valuation() {
            if v % 2 == 0 {
                return Err(Error::NotInMOddSpan { exponent: v });
            }
            let j = (v - 1) / 2;
            if j > self.dmax || j >= self.basis.len() {
                return Err(Error::TableTooSmall {
                    have: self.dmax,
                    need: j,
                });
            }
            rest += &self.basis[j].truncated(prec);
            g.flip_bit(j);
        }
        Ok(g)
    }
}

/// One-shot reconstruction with `dmax`; see [`Reconstructor::reconstruct`].
pub fn poly_of_series(s: &Gf2Series, dmax: usize) -> Result<Gf2Poly> {
    Reconstructor::new(dmax, s.precision()).reconstruct(s)
}

/// Compares `U_5` on the series of `(r^2+r) r^{2n}` with the series of
/// `U((r^2+r) r^{2n})`.
pub fn verify_u_agreement(n: usize, precision: usize) -> Result<()> {
    let precision = precision.max(5 * (4 * n + 6));
    let b = MOddElem::new(Gf2Poly::monomial(n));
    let lhs = u5(&series_of_modd(&b, precision));
    let rhs = series_of_poly(&crate::semilinear::apply_u(&b.to_r()), lhs.precision());
    match lhs.first_difference(&rhs) {
        None => Ok(()),
        Some(e) => Err(Error::AgreementFailure { n, exponent: e }),
    }
}

/// First exponent where the series of `f` and the theta series differ.
pub fn theta_mismatch(f: &PolyInR, kind: ThetaKind, precision: usize) -> Option<usize> {
    series_of_poly(f, precision).first_difference(&gen_theta(kind, precision))
}
