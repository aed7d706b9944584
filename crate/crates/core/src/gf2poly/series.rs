use std::fmt;

use super::Gf2Poly;
use crate::error::{Error, Result};

/// Truncated power series over GF(2): the coefficients of `x^e` for
/// `e < precision` are known exactly, everything above is unknown.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Series {
    bits: Gf2Poly,
    precision: usize,
}

/// Series operations exposed by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    DivExact,
}

impl Gf2Series {
    /// Wraps `bits`, discarding anything at or above `precision`.
    pub fn new(bits: Gf2Poly, precision: usize) -> Self {
        Self {
            bits: bits.truncated(precision),
            precision,
        }
    }

    pub fn zero(precision: usize) -> Self {
        Self::new(Gf2Poly::zero(), precision)
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Known coefficients as a polynomial in `x`.
    pub fn bits(&self) -> &Gf2Poly {
        &self.bits
    }

    pub fn into_bits(self) -> Gf2Poly {
        self.bits
    }

    /// Coefficient of `x^e`, or `None` when `e` is beyond the precision.
    pub fn coeff(&self, e: usize) -> Option<bool> {
        (e < self.precision).then(|| self.bits.bit(e))
    }

    /// `true` when all known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    /// Lowest nonzero exponent; `None` when zero to the known precision.
    pub fn valuation(&self) -> Option<usize> {
        self.bits.valuation()
    }

    /// Valuation, counting a series that vanishes to precision `P` as
    /// having valuation `P` (the strongest claim the data supports).
    fn known_valuation(&self) -> usize {
        self.valuation().unwrap_or(self.precision)
    }

    pub fn truncated(&self, precision: usize) -> Gf2Series {
        Gf2Series::new(self.bits.clone(), precision.min(self.precision))
    }

    pub fn add(&self, other: &Gf2Series) -> Gf2Series {
        let p = self.precision.min(other.precision);
        Gf2Series::new(&self.bits.truncated(p) + &other.bits.truncated(p), p)
    }

    /// Precision `min(P_a + v_b, P_b + v_a)`, capped at `P_a + P_b`.
    pub fn mul(&self, other: &Gf2Series) -> Gf2Series {
        let p = (self.precision + other.known_valuation())
            .min(other.precision + self.known_valuation())
            .min(self.precision + other.precision);
        Gf2Series::new(self.bits.mul_truncated(&other.bits, p), p)
    }

    /// Frobenius square; `(a + O(x^P))^2 = a^2 + O(x^{2P})` in characteristic 2.
    pub fn square(&self) -> Gf2Series {
        Gf2Series::new(self.bits.square(), 2 * self.precision)
    }

    /// `q` with `q * divisor = self`, to precision `min(P_a, P_b) - v_b`.
    pub fn div_exact(&self, divisor: &Gf2Series) -> Result<Gf2Series> {
        let vb = divisor.valuation().ok_or(Error::DivisionImpossible {
            dividend: self.known_valuation(),
            divisor: divisor.precision,
        })?;
        let va = self.known_valuation();
        if vb > va {
            return Err(Error::DivisionImpossible {
                dividend: va,
                divisor: vb,
            });
        }
        let p = self.precision.min(divisor.precision) - vb;
        // a / b = (a / x^vb) / (b / x^vb) with the second factor a unit.
        let num = self.bits.shr(vb).truncated(p);
        let den = divisor.bits.shr(vb).truncated(p);
        let inv = unit_inverse(&den, p);
        Ok(Gf2Series::new(num.mul_truncated(&inv, p), p))
    }

    pub fn arith(&self, other: &Gf2Series, op: SeriesOp) -> Result<Gf2Series> {
        match op {
            SeriesOp::Add => Ok(self.add(other)),
            SeriesOp::Mul => Ok(self.mul(other)),
            SeriesOp::DivExact => self.div_exact(other),
        }
    }

    /// First exponent below the common precision where the series differ.
    pub fn first_difference(&self, other: &Gf2Series) -> Option<usize> {
        self.add(other).valuation()
    }
}

/// Inverse of a unit `u` (constant term 1) modulo `x^n`. Newton's step
/// `v <- v (2 - u v)` reduces to `v <- u v^2` in characteristic 2: if
/// `u v = 1 + e` then `u (u v^2) = 1 + e^2`.
fn unit_inverse(u: &Gf2Poly, n: usize) -> Gf2Poly {
    debug_assert!(u.bit(0));
    let mut v = Gf2Poly::one();
    let mut k = 1;
    while k < n {
        k = (2 * k).min(n);
        v = u.mul_truncated(&v.square(), k);
    }
    v.truncated(n)
}

impl fmt::Debug for Gf2Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Gf2Series({} + O(x^{}))",
            self.bits.format_exponents(),
            self.precision
        )
    }
}
