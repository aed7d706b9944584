//! The `Z/2[G^2]`-modules `N1 = <G>` and `N2 = <u_0, u_1, u_2, u_4, u_5>`
//! inside `M(odd)`, the basis `{J_k}` of `N2/N1`, and its splitting by the
//! mod-20 character `chi`.
//!
//! Everything is computed in the `g`-variable of `M(odd)`, where
//! multiplication by `G^2` is multiplication by `W = t^6 + t^5` and
//! `u_i` has degree `i`; so `W^n u_i` has degree `6n + i`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gf2poly::Gf2Poly;
use crate::semilinear::{MOddElem, PolyInR};

/// Indices `i` of the generators `u_i` of `N2`.
pub const U_INDICES: [usize; 5] = [0, 1, 2, 4, 5];

/// `W = t^6 + t^5`, the `g`-form of multiplication by `G^2`.
const W_WORD: u64 = 0b110_0000;

/// `g`-forms of `u_0, u_1, u_2, u_4, u_5`.
const U_G_WORDS: [u64; 5] = [0b1, 0b10, 0b100, 0b1_1000, 0b10_1000];

/// `J`-indices of `u_i` (before the shift by `10n` for `W^n u_i`).
const U_J_IMAGES: [&[u64]; 5] = [&[1], &[7, 3], &[], &[7], &[11, 9, 7]];

fn slot(i: usize) -> Option<usize> {
    U_INDICES.iter().position(|&u| u == i)
}

/// Coordinates over `Z/2[s]`, `s = G^2`, in the basis `u_0, u_1, u_2, u_4, u_5`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct N2Coords {
    pub coeffs: [Gf2Poly; 5],
}

impl N2Coords {
    /// Coefficient polynomial of `u_i`.
    pub fn coeff(&self, i: usize) -> Option<&Gf2Poly> {
        slot(i).map(|k| &self.coeffs[k])
    }

    /// `sum_i coeff_i(W) u_i` in the `g`-variable.
    pub fn recompose_g(&self) -> Gf2Poly {
        let w = Gf2Poly::from_limbs(vec![W_WORD]);
        let mut out = Gf2Poly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let u = Gf2Poly::from_limbs(vec![U_G_WORDS[k]]);
            out += &c.compose(&w).mul(&u);
        }
        out
    }

    pub fn recompose(&self) -> PolyInR {
        MOddElem::new(self.recompose_g()).to_r()
    }
}

/// Powers `W^n` cached on demand.
struct WPowers(Vec<Gf2Poly>);

impl WPowers {
    fn new() -> Self {
        WPowers(vec![Gf2Poly::one()])
    }

    fn get(&mut self, n: usize) -> &Gf2Poly {
        while self.0.len() <= n {
            let next = self.0.last().unwrap().mul_word(W_WORD);
            self.0.push(next);
        }
        &self.0[n]
    }
}

/// Coordinates of a `g`-polynomial in `N2`; `NotInN2` reports the first
/// leading degree `6n + 3` met (as an `r`-degree `12n + 8`).
pub fn n2_decompose_g(g: &Gf2Poly) -> Result<N2Coords> {
    let mut rest = g.clone();
    let mut coords = N2Coords::default();
    let mut powers = WPowers::new();
    while let Some(j) = rest.degree() {
        let (n, i) = (j / 6, j % 6);
        let k = slot(i).ok_or(Error::NotInN2 { degree: 2 * j + 2 })?;
        let term = powers.get(n).mul_word(U_G_WORDS[k]);
        rest += &term;
        coords.coeffs[k].flip_bit(n);
    }
    Ok(coords)
}

/// Membership in `N2` and coordinates, for an `r`-polynomial.
pub fn n2_decompose(f: &PolyInR) -> Result<N2Coords> {
    let m = MOddElem::from_r(f).map_err(|_| Error::NotInN2 {
        degree: f.poly().degree().unwrap_or(0),
    })?;
    n2_decompose_g(&m.g)
}

/// A finite sum `sum_{k in S} J_k` in `N2/N1`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct JVector(BTreeSet<u64>);

impl JVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_indices<I: IntoIterator<Item = u64>>(idx: I) -> Result<Self> {
        let mut v = JVector::new();
        for k in idx {
            if k == 0 || k % 2 == 0 || k % 5 == 0 {
                return Err(Error::BadIndex(k as i64));
            }
            v.toggle(k);
        }
        Ok(v)
    }

    pub fn toggle(&mut self, k: u64) {
        if !self.0.remove(&k) {
            self.0.insert(k);
        }
    }

    pub fn add(&self, other: &JVector) -> JVector {
        JVector(self.0.symmetric_difference(&other.0).copied().collect())
    }

    pub fn indices(&self) -> impl DoubleEndedIterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, k: u64) -> bool {
        self.0.contains(&k)
    }

    /// Component in `N2a`: indices with `chi = +1`.
    pub fn project_a(&self) -> JVector {
        JVector(self.0.iter().copied().filter(|&k| chi_unchecked(k) == 1).collect())
    }

    /// Component in `N2b`: indices with `chi = -1`.
    pub fn project_b(&self) -> JVector {
        JVector(self.0.iter().copied().filter(|&k| chi_unchecked(k) == -1).collect())
    }
}

fn chi_unchecked(k: u64) -> i8 {
    match k % 20 {
        1 | 3 | 7 | 9 => 1,
        _ => -1,
    }
}

/// The mod-20 character with `chi = 1` on `1, 3, 7, 9` and `-1` on
/// `11, 13, 17, 19`.
pub fn chi(k: i64) -> Result<i8> {
    if k % 2 == 0 || k % 5 == 0 {
        return Err(Error::BadIndex(k));
    }
    Ok(chi_unchecked(k.rem_euclid(20) as u64))
}

/// Image in `N2/N1` of a `g`-polynomial in `N2`.
pub fn j_image_g(g: &Gf2Poly) -> Result<JVector> {
    let coords = n2_decompose_g(g)?;
    let mut out = JVector::new();
    for (k, c) in coords.coeffs.iter().enumerate() {
        for n in c.iter_exponents() {
            for &j in U_J_IMAGES[k] {
                out.toggle(j + 10 * n as u64);
            }
        }
    }
    Ok(out)
}

pub fn j_image(f: &PolyInR) -> Result<JVector> {
    let m = MOddElem::from_r(f).map_err(|_| Error::NotInN2 {
        degree: f.poly().degree().unwrap_or(0),
    })?;
    j_image_g(&m.g)
}

/// Which polynomials stand for `J_3` and `J_9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JAssignment {
    /// `J_3 = F^8/G`, `J_9 = F^4 G`.
    Standard,
    /// `J_3 = F^4 G`, `J_9 = F^8/G`.
    Swapped,
}

fn f8_over_g() -> PolyInR {
    let q = PolyInR::f()
        .pow(8)
        .into_poly()
        .div_exact(PolyInR::g().poly())
        .expect("G divides F^8");
    PolyInR::new(q)
}

fn j_base(k0: u64, assignment: JAssignment) -> PolyInR {
    let (f, g) = (PolyInR::f(), PolyInR::g());
    match (k0, assignment) {
        (1, _) => f,
        (7, _) => f.pow(2).mul(&g),
        (3, JAssignment::Standard) | (9, JAssignment::Swapped) => f8_over_g(),
        (3, JAssignment::Swapped) | (9, JAssignment::Standard) => f.pow(4).mul(&g),
        _ => unreachable!(),
    }
}

/// Polynomial representative of `J_k`, with `J_{k+10} = G^2 J_k`.
pub fn j_element_with(k: i64, assignment: JAssignment) -> Result<PolyInR> {
    if k <= 0 || k % 2 == 0 || k % 5 == 0 {
        return Err(Error::BadIndex(k));
    }
    let k = k as u64;
    let base = j_base(k % 10, assignment);
    Ok(base.mul(&PolyInR::g().pow(2 * (k / 10))))
}

pub fn j_element(k: i64) -> Result<PolyInR> {
    j_element_with(k, JAssignment::Standard)
}

/// `true` when every `J_k` with `k <= bound` maps to `{k}` under the given
/// assignment.
pub fn assignment_consistent(assignment: JAssignment, bound: i64) -> bool {
    (1..=bound).filter(|k| k % 2 != 0 && k % 5 != 0).all(|k| {
        let f = j_element_with(k, assignment).expect("valid index");
        let want = JVector::from_indices([k as u64]).expect("valid index");
        j_image(&f).map(|v| v == want).unwrap_or(false)
    })
}

/// Determinant over `Z/2[s]` of the coordinates of `G, J_1, J_3, J_7, J_9`
/// in the basis `u_0, u_1, u_2, u_4, u_5`. It is `1` exactly when the two
/// families span the same `Z/2[G^2]`-module.
pub fn j_family_determinant(assignment: JAssignment) -> Result<Gf2Poly> {
    let mut rows: Vec<[Gf2Poly; 5]> = Vec::new();
    rows.push(n2_decompose(&PolyInR::g())?.coeffs);
    for k in [1, 3, 7, 9] {
        rows.push(n2_decompose(&j_element_with(k, assignment)?)?.coeffs);
    }
    Ok(determinant(&rows))
}

/// Sum over permutations (signs vanish in characteristic 2).
fn determinant(rows: &[[Gf2Poly; 5]]) -> Gf2Poly {
    fn go(rows: &[[Gf2Poly; 5]], r: usize, used: u8, acc: &Gf2Poly, out: &mut Gf2Poly) {
        if r == rows.len() {
            *out += acc;
            return;
        }
        for c in 0..5 {
            if used >> c & 1 == 0 && !rows[r][c].is_zero() {
                go(rows, r + 1, used | 1 << c, &acc.mul(&rows[r][c]), out);
            }
        }
    }
    let mut out = Gf2Poly::zero();
    go(rows, 0, 0, &Gf2Poly::one(), &mut out);
    out
}

/// Expected `N2a`-image shape of `f_n` for `n = 0, 2, 6, 8 (mod 12)`:
/// leading index and bound on the remaining indices (`None`: no remainder).
pub fn projection_shape(n: usize) -> Option<(u64, Option<u64>)> {
    let m = (n / 12) as u64;
    match n % 12 {
        0 => Some((20 * m + 1, (m > 0).then(|| 20 * m - 11))),
        6 => Some((20 * m + 3, Some(20 * m + 1))),
        2 => Some((20 * m + 7, Some(20 * m + 3))),
        8 => Some((20 * m + 9, Some(20 * m + 7))),
        _ => None,
    }
}

/// One checked image `project_a(j_image(f_n))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionRow {
    pub n: usize,
    pub image: JVector,
    pub leading: u64,
    pub bound: Option<u64>,
}

/// Checks the `N2a`-image of the kernel element `f_n` whose `g`-form is `g`.
pub fn check_projection(n: usize, g: &Gf2Poly) -> Result<ProjectionRow> {
    let (leading, bound) = projection_shape(n).ok_or(Error::NotApplicable { n })?;
    let image = j_image_g(g)?.project_a();
    let mismatch = || Error::ProjectionMismatch {
        n,
        got: image.indices().collect(),
        leading,
        bound,
    };
    if image.max_index() != Some(leading) {
        return Err(mismatch());
    }
    let rest_ok = image
        .indices()
        .filter(|&k| k != leading)
        .all(|k| bound.is_some_and(|b| k <= b));
    if !rest_ok {
        return Err(mismatch());
    }
    Ok(ProjectionRow {
        n,
        image,
        leading,
        bound,
    })
}

/// Projection checks for `n = 12m, 12m+6, 12m+2, 12m+8` against the
/// `g`-forms produced by `lookup`.
pub fn verify_projection<'a>(
    m: usize,
    lookup: impl Fn(usize) -> Option<&'a Gf2Poly>,
) -> Result<Vec<ProjectionRow>> {
    [12 * m, 12 * m + 6, 12 * m + 2, 12 * m + 8]
        .into_iter()
        .map(|n| {
            let g = lookup(n).ok_or(Error::TableTooSmall {
                have: n.saturating_sub(1),
                need: n,
            })?;
            check_projection(n, g)
        })
        .collect()
}
