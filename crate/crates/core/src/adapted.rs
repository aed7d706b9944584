//! Hecke operators on `K = ker(U_5 + I)` in the basis `f_n`, the adapted
//! basis `m_{i,j}` on which `T_3` and `T_7` act as index shifts, and the
//! power series `u_p` with `T_p = u_p(T_3, T_7)`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2poly::{Gf2Poly, Gf2Series};
use crate::linalg::{self, Echelon};
use crate::modforms::{gen_theta, hecke_tp, pr, series_of_modd, series_of_poly, u5, PrecisionPolicy, Reconstructor, ThetaKind};
use crate::nmod::{j_element, j_image_g, JVector};
use crate::recurrence::{KernelBasis, SequenceTable};
use crate::semilinear::{MOddElem, PolyInR};

/// Extra `g`-degrees reconstructed above the basis bound, so that an image
/// escaping the span is seen rather than truncated away.
pub const CLOSURE_MARGIN: usize = 12;

#[derive(Debug, Clone)]
pub struct KEntry {
    pub n: usize,
    pub g: Gf2Poly,
    pub series: Gf2Series,
}

/// The elements `f_n = (r^2+r) g_n(r^2)`, `n <= N`, as `g`-polynomials and
/// as series at the policy precision. Coordinates index this list.
#[derive(Debug, Clone)]
pub struct KBasis {
    policy: PrecisionPolicy,
    entries: Vec<KEntry>,
    by_degree: BTreeMap<usize, usize>,
}

impl KBasis {
    /// Checks `U_5 f_n = f_n` on every series.
    pub fn build(kernel: &KernelBasis, bound: usize, policy: PrecisionPolicy) -> Result<KBasis> {
        let items: Vec<(usize, Gf2Poly)> = kernel
            .iter()
            .filter(|&(n, _)| n <= bound)
            .map(|(n, g)| (n, g.clone()))
            .collect();
        let entries: Vec<KEntry> = items
            .into_par_iter()
            .map(|(n, g)| {
                let series = series_of_modd(&MOddElem::new(g.clone()), policy.precision);
                if let Some(e) = u5(&series).first_difference(&series) {
                    return Err(Error::MembershipFailure { n, exponent: e });
                }
                Ok(KEntry { n, g, series })
            })
            .collect::<Result<_>>()?;
        let by_degree = entries.iter().enumerate().map(|(k, e)| (e.n, k)).collect();
        Ok(KBasis {
            policy,
            entries,
            by_degree,
        })
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[KEntry] {
        &self.entries
    }

    pub fn index_of(&self, n: usize) -> Option<usize> {
        self.by_degree.get(&n).copied()
    }

    /// Largest `n`.
    pub fn bound(&self) -> usize {
        self.entries.last().map_or(0, |e| e.n)
    }

    /// Coordinates of a `g`-polynomial by elimination on leading degrees.
    pub fn coordinates(&self, g: &Gf2Poly) -> std::result::Result<Gf2Poly, usize> {
        let mut rest = g.clone();
        let mut x = Gf2Poly::zero();
        while let Some(d) = rest.degree() {
            let k = self.index_of(d).ok_or(d)?;
            rest += &self.entries[k].g;
            x.flip_bit(k);
        }
        Ok(x)
    }

    /// `sum_k x_k g_k`.
    pub fn combine(&self, x: &Gf2Poly) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        for k in x.iter_exponents() {
            out += &self.entries[k].g;
        }
        out
    }
}

/// Matrix of `T_p` on a [`KBasis`]: `columns[k]` holds the coordinates of
/// `T_p f_k`.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub p: u64,
    pub columns: Vec<Gf2Poly>,
    /// Largest coordinate index occurring in any column.
    pub max_index: Option<usize>,
}

impl OperatorMatrix {
    pub fn apply(&self, x: &Gf2Poly) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        for k in x.iter_exponents() {
            out += &self.columns[k];
        }
        out
    }

    pub fn apply_power(&self, x: &Gf2Poly, k: usize) -> Gf2Poly {
        (0..k).fold(x.clone(), |acc, _| self.apply(&acc))
    }
}

/// `T_p` on each `f_n`, reconstructed and re-expressed in the basis.
pub fn t_matrix(p: u64, basis: &KBasis) -> Result<OperatorMatrix> {
    let policy = basis.policy();
    let out_prec = policy.precision.saturating_sub(1) / p as usize + 1;
    let rec = Reconstructor::new(policy.dmax, out_prec);
    let columns: Vec<Gf2Poly> = basis
        .entries()
        .par_iter()
        .map(|e| {
            let image = hecke_tp(&e.series, p)?;
            let g = rec.reconstruct(&image).map_err(|err| match err {
                Error::TableTooSmall { need, .. } => Error::ClosureFailure {
                    p,
                    n: e.n,
                    detail: format!("image has a term at g-degree {need}"),
                },
                other => other,
            })?;
            basis.coordinates(&g).map_err(|d| Error::ClosureFailure {
                p,
                n: e.n,
                detail: format!("image has leading g-degree {d} outside the basis"),
            })
        })
        .collect::<Result<_>>()?;
    let max_index = columns.iter().filter_map(|c| c.degree()).max();
    Ok(OperatorMatrix {
        p,
        columns,
        max_index,
    })
}

/// Grid `(i, j) -> m_{i,j}` in [`KBasis`] coordinates, `i + j <= depth`.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    pub depth: usize,
    pub cells: BTreeMap<(usize, usize), Gf2Poly>,
}

impl AdaptedBasis {
    /// Cells in diagonal order: `(0,0)`, then `(1,0), (0,1)`, ...
    pub fn cell_order(depth: usize) -> Vec<(usize, usize)> {
        (0..=depth)
            .flat_map(|d| (0..=d).rev().map(move |i| (i, d - i)))
            .collect()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Gf2Poly> {
        self.cells.get(&(i, j))
    }

    /// `T_3 m_{i,j} = m_{i-1,j}` and `T_7 m_{i,j} = m_{i,j-1}` (zero at the
    /// edges); returns the first cell that fails.
    pub fn check_shifts(&self, m3: &OperatorMatrix, m7: &OperatorMatrix) -> Option<(usize, usize)> {
        let zero = Gf2Poly::zero();
        self.cells.iter().find_map(|(&(i, j), x)| {
            let t3 = if i == 0 { &zero } else { &self.cells[&(i - 1, j)] };
            let t7 = if j == 0 { &zero } else { &self.cells[&(i, j - 1)] };
            (m3.apply(x) != *t3 || m7.apply(x) != *t7).then_some((i, j))
        })
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self.cells.values())
    }
}

/// Stacks `M3 x` over `M7 x` as one vector of `2 * len` bits.
fn stack(a: &Gf2Poly, b: &Gf2Poly, len: usize) -> Gf2Poly {
    let mut out = a.clone();
    out.add_shifted(b, len);
    out
}

/// Solves cell by cell in diagonal order for the numerically smallest
/// coordinate vector with the prescribed `T_3` and `T_7` images.
pub fn build_adapted(depth: usize, m3: &OperatorMatrix, m7: &OperatorMatrix) -> Result<AdaptedBasis> {
    let len = m3.columns.len();
    let columns: Vec<Gf2Poly> = (0..len)
        .map(|k| stack(&m3.columns[k], &m7.columns[k], len))
        .collect();
    let mut cells = BTreeMap::new();
    let zero = Gf2Poly::zero();
    for (i, j) in AdaptedBasis::cell_order(depth) {
        if (i, j) == (0, 0) {
            cells.insert((0, 0), Gf2Poly::monomial(0));
            continue;
        }
        let t3 = if i == 0 { &zero } else { &cells[&(i - 1, j)] };
        let t7 = if j == 0 { &zero } else { &cells[&(i, j - 1)] };
        let rhs = stack(t3, t7, len);
        let sol = linalg::solve(&columns, &rhs).map_err(|rank| Error::NoSolution {
            i,
            j,
            rank,
            unknowns: len,
        })?;
        cells.insert((i, j), sol.x);
    }
    let basis = AdaptedBasis { depth, cells };
    let expect = (depth + 1) * (depth + 2) / 2;
    if basis.rank() != expect {
        return Err(Error::DimensionViolation {
            m: depth,
            detail: format!("adapted grid has rank {}, expected {expect}", basis.rank()),
        });
    }
    if let Some((i, j)) = basis.check_shifts(m3, m7) {
        return Err(Error::NoSolution {
            i,
            j,
            rank: 0,
            unknowns: len,
        });
    }
    Ok(basis)
}

/// `u_p = sum_{(a,b) in terms} X^a Y^b`, truncated at total degree `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UElement {
    pub p: u64,
    pub depth: usize,
    pub terms: Vec<(usize, usize)>,
}

impl UElement {
    pub fn constant_term(&self) -> bool {
        self.terms.contains(&(0, 0))
    }

    pub fn is_monomial(&self, a: usize, b: usize) -> bool {
        self.terms == [(a, b)]
    }
}

/// Solves `T_p m_{i,j} = sum u_{a,b} m_{i-a,j-b}` over the whole grid at
/// once, with `u_{0,0}` among the unknowns.
pub fn extract_u(p: u64, ab: &AdaptedBasis, mp: &OperatorMatrix) -> Result<UElement> {
    let len = mp.columns.len();
    let cells = AdaptedBasis::cell_order(ab.depth);
    let unknowns = cells.clone();
    let columns: Vec<Gf2Poly> = unknowns
        .iter()
        .map(|&(a, b)| {
            let mut col = Gf2Poly::zero();
            for (c, &(i, j)) in cells.iter().enumerate() {
                if a <= i && b <= j {
                    col.add_shifted(&ab.cells[&(i - a, j - b)], c * len);
                }
            }
            col
        })
        .collect();
    let mut rhs = Gf2Poly::zero();
    for (c, &(i, j)) in cells.iter().enumerate() {
        rhs.add_shifted(&mp.apply(&ab.cells[&(i, j)]), c * len);
    }
    let sol = linalg::solve(&columns, &rhs).map_err(|rank| Error::NotMultiplication {
        p,
        detail: format!("inconsistent across the grid (rank {rank} of {} unknowns)", unknowns.len()),
    })?;
    let terms: Vec<(usize, usize)> = sol.x.iter_exponents().map(|k| unknowns[k]).collect();
    let u = UElement {
        p,
        depth: ab.depth,
        terms,
    };
    if u.constant_term() {
        return Err(Error::NotMultiplication {
            p,
            detail: "nonzero constant term".into(),
        });
    }
    Ok(u)
}

/// Everything derived from one choice of basis bound.
#[derive(Debug, Clone)]
pub struct HeckeSetup {
    pub basis: KBasis,
    pub matrices: BTreeMap<u64, OperatorMatrix>,
}

impl HeckeSetup {
    /// Basis `f_n, n <= bound` (normalized kernel elements) with matrices
    /// for every prime in `primes`.
    pub fn build(kernel: &KernelBasis, bound: usize, primes: &[u64], precision: Option<usize>) -> Result<HeckeSetup> {
        let max_p = primes.iter().copied().max().unwrap_or(3) as usize;
        let policy = PrecisionPolicy::new(bound + CLOSURE_MARGIN, max_p).with_override(precision);
        let basis = KBasis::build(kernel, bound, policy)?;
        let matrices = primes
            .iter()
            .map(|&p| t_matrix(p, &basis).map(|m| (p, m)))
            .collect::<Result<_>>()?;
        Ok(HeckeSetup { basis, matrices })
    }

    pub fn matrix(&self, p: u64) -> Option<&OperatorMatrix> {
        self.matrices.get(&p)
    }
}

/// Adapted basis to `depth` with matrices for `primes` (3 and 7 are always
/// included), doubling the basis bound from `start` up to `cap` whenever
/// the operators do not close or a cell has no solution.
pub fn adapted_with_growth(
    depth: usize,
    primes: &[u64],
    start: usize,
    cap: usize,
    precision: Option<usize>,
) -> Result<(HeckeSetup, AdaptedBasis)> {
    let mut all: Vec<u64> = vec![3, 7];
    all.extend(primes.iter().copied().filter(|p| *p != 3 && *p != 7));
    let table = SequenceTable::generate(cap);
    let kernel = KernelBasis::compute(&table, cap)?.normalize_lemma34()?;
    let mut bound = start.max(2);
    loop {
        let attempt = HeckeSetup::build(&kernel, bound, &all, precision).and_then(|setup| {
            let ab = build_adapted(depth, &setup.matrices[&3], &setup.matrices[&7])?;
            Ok((setup, ab))
        });
        match attempt {
            Err(Error::ClosureFailure { .. } | Error::NoSolution { .. }) if bound < cap => {
                bound = (2 * bound).min(cap);
            }
            other => return other,
        }
    }
}

/// One checked element of the map `K -> W_a`.
#[derive(Debug, Clone)]
pub struct WaRow {
    pub n: usize,
    pub image: JVector,
    pub valuation: Option<usize>,
}

/// `pr` of the series of the `N2a`-part of the `g`-polynomial `g`.
pub fn w_of(g: &Gf2Poly, precision: usize) -> Result<(JVector, Gf2Series)> {
    let image = j_image_g(g)?.project_a();
    let mut poly = PolyInR::new(Gf2Poly::zero());
    for k in image.indices() {
        poly = poly.add(&j_element(k as i64)?);
    }
    Ok((image, pr(&series_of_poly(&poly, precision))))
}

/// `w(f_0) = D`, independence of the `w(f_n)`, and
/// `w(T_q f_n) = T_q w(f_n)` for `q = 3, 7`, for `n <= nmax`.
pub fn wa_check(setup: &HeckeSetup, nmax: usize) -> Result<Vec<WaRow>> {
    let basis = &setup.basis;
    let precision = basis.policy().precision;
    let ws: Vec<(JVector, Gf2Series)> = basis
        .entries()
        .par_iter()
        .map(|e| w_of(&e.g, precision))
        .collect::<Result<_>>()?;

    let d = gen_theta(ThetaKind::D, precision);
    if let Some(e) = ws.first().and_then(|(_, w)| w.first_difference(&d)) {
        return Err(Error::EquivarianceFailure {
            n: 0,
            q: 0,
            detail: format!("w(f_0) differs from D at x^{e}"),
        });
    }

    let mut rows = Vec::new();
    let mut span = Echelon::new();
    for (k, e) in basis.entries().iter().enumerate() {
        if e.n > nmax {
            break;
        }
        let (image, w) = &ws[k];
        if let Some(lin) = dependent(&mut span, w) {
            return Err(Error::EquivarianceFailure {
                n: e.n,
                q: 0,
                detail: format!("w(f_{}) is a combination of earlier images ({lin})", e.n),
            });
        }
        for q in [3u64, 7] {
            let m = setup.matrix(q).ok_or(Error::Config(format!("no matrix for T_{q}")))?;
            let rhs = hecke_tp(w, q)?;
            let mut lhs = Gf2Series::zero(precision);
            for c in m.columns[k].iter_exponents() {
                lhs = lhs.add(&ws[c].1);
            }
            if let Some(x) = lhs.first_difference(&rhs) {
                return Err(Error::EquivarianceFailure {
                    n: e.n,
                    q,
                    detail: format!("coefficients differ at x^{x}"),
                });
            }
        }
        rows.push(WaRow {
            n: e.n,
            image: image.clone(),
            valuation: w.valuation(),
        });
    }
    Ok(rows)
}

/// Inserts the known bits of `w`; `Some(tag)` on dependence.
fn dependent(span: &mut Echelon, w: &Gf2Series) -> Option<String> {
    match span.insert(w.bits().clone(), Gf2Poly::monomial(span.rank())) {
        linalg::Insert::Pivot(_) => None,
        linalg::Insert::Dependent(tag) => Some(tag.format_exponents()),
    }
}
