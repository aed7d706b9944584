//! Gaussian elimination over GF(2) on bit vectors stored as [`Gf2Poly`].
//!
//! A vector's pivot is its highest set bit. Rows carry a `tag` recording
//! which inserted vectors were combined to form them, so dependencies come
//! out as explicit combinations.

use crate::gf2poly::Gf2Poly;

#[derive(Debug, Clone)]
pub struct Row {
    pub value: Gf2Poly,
    pub tag: Gf2Poly,
}

/// Outcome of [`Echelon::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insert {
    /// New pivot at the given bit.
    Pivot(usize),
    /// The vector reduced to zero; the tag is the vanishing combination.
    Dependent(Gf2Poly),
}

/// Rows in echelon form, indexed by pivot bit.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<Option<Row>>,
    rank: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pivot(&self, bit: usize) -> Option<&Row> {
        self.rows.get(bit).and_then(|r| r.as_ref())
    }

    pub fn pivots(&self) -> impl Iterator<Item = (usize, &Row)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (i, r)))
    }

    /// Clears leading bits until the leading bit has no pivot. Returns the
    /// residual and the accumulated tag.
    pub fn reduce_leading(&self, mut value: Gf2Poly, mut tag: Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        while let Some(d) = value.degree() {
            match self.pivot(d) {
                Some(row) => {
                    value += &row.value;
                    tag += &row.tag;
                }
                None => break,
            }
        }
        (value, tag)
    }

    /// Clears every bit that sits on a pivot, top-down. For a fixed
    /// coset `value + span`, the result is its numerically smallest member.
    pub fn reduce_full(&self, mut value: Gf2Poly, mut tag: Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let Some(top) = value.degree() else {
            return (value, tag);
        };
        for d in (0..=top.min(self.rows.len().saturating_sub(1))).rev() {
            if value.bit(d) {
                if let Some(row) = self.pivot(d) {
                    value += &row.value;
                    tag += &row.tag;
                }
            }
        }
        (value, tag)
    }

    pub fn contains(&self, value: &Gf2Poly) -> bool {
        self.reduce_leading(value.clone(), Gf2Poly::zero()).0.is_zero()
    }

    pub fn insert(&mut self, value: Gf2Poly, tag: Gf2Poly) -> Insert {
        let (value, tag) = self.reduce_leading(value, tag);
        match value.degree() {
            None => Insert::Dependent(tag),
            Some(d) => {
                if self.rows.len() <= d {
                    self.rows.resize_with(d + 1, || None);
                }
                self.rows[d] = Some(Row { value, tag });
                self.rank += 1;
                Insert::Pivot(d)
            }
        }
    }
}

/// Rank of a family of vectors.
pub fn rank<'a, I: IntoIterator<Item = &'a Gf2Poly>>(vectors: I) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v.clone(), Gf2Poly::zero());
    }
    e.rank()
}

/// Solution data for `sum_k x_k columns[k] = rhs`.
#[derive(Debug, Clone)]
pub struct Solution {
    /// Numerically smallest solution (bit `k` = `x_k`), i.e. the one whose
    /// highest set index is least, ties broken recursively downward.
    pub x: Gf2Poly,
    /// Rank of the column family.
    pub rank: usize,
    /// Null space basis, echelonized by highest set index.
    pub kernel: Vec<Gf2Poly>,
}

/// Solves a linear system given by its columns. `Err(rank)` when `rhs`
/// is outside the column span.
pub fn solve(columns: &[Gf2Poly], rhs: &Gf2Poly) -> Result<Solution, usize> {
    let mut span = Echelon::new();
    let mut null = Echelon::new();
    for (k, c) in columns.iter().enumerate() {
        if let Insert::Dependent(tag) = span.insert(c.clone(), Gf2Poly::monomial(k)) {
            null.insert(tag, Gf2Poly::zero());
        }
    }
    let (res, x) = span.reduce_leading(rhs.clone(), Gf2Poly::zero());
    if !res.is_zero() {
        return Err(span.rank());
    }
    let (x, _) = null.reduce_full(x, Gf2Poly::zero());
    Ok(Solution {
        x,
        rank: span.rank(),
        kernel: null.pivots().map(|(_, r)| r.value.clone()).collect(),
    })
}

/// Null space of the map sending `e_k` to `columns[k]`.
pub fn kernel(columns: &[Gf2Poly]) -> Vec<Gf2Poly> {
    let mut span = Echelon::new();
    let mut out = Vec::new();
    for (k, c) in columns.iter().enumerate() {
        if let Insert::Dependent(tag) = span.insert(c.clone(), Gf2Poly::monomial(k)) {
            out.push(tag);
        }
    }
    out
}
