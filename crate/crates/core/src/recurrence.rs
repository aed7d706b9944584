//! The sequences `A_n`, `C_n = A_n + t^n` in `Z/2[t]`, the map
//! `phi: t^k -> C_k`, and the kernel basis `{g_n}` of `phi`.
//!
//! `C_{n+6} = C_{n+5} + (t^6+t^5+t^2+t) C_n + t^n (t^2+t)` with seeds
//! `0, 1, 1, t, t^2, t^4+t^2+t`; `A` obeys the homogeneous recurrence with
//! seeds `1, t+1, t^2+1, t^3+t, t^4+t^2, t^5+t^4+t^2+t`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf2poly::Gf2Poly;
use crate::linalg::{self, Echelon, Insert};
use crate::semilinear::{MOddElem, PolyInR};

/// `t^6 + t^5 + t^2 + t`.
const STEP_WORD: u64 = 0b110_0110;

const A_SEEDS: [u64; 6] = [0b1, 0b11, 0b101, 0b1010, 0b1_0100, 0b11_0110];
const C_SEEDS: [u64; 6] = [0b0, 0b1, 0b1, 0b10, 0b100, 0b1_0110];

/// `true` for the residues `n = 0, 2 (mod 6)` that carry a kernel element.
pub fn is_kernel_degree(n: usize) -> bool {
    n.is_multiple_of(6) || n % 6 == 2
}

/// Number of kernel degrees `n <= bound`.
pub fn kernel_degree_count(bound: usize) -> usize {
    (0..=bound).filter(|&n| is_kernel_degree(n)).count()
}

#[derive(Debug, Clone)]
pub struct SequenceTable {
    c: Vec<Gf2Poly>,
    a: Vec<Gf2Poly>,
}

impl SequenceTable {
    /// `C_0..C_N` and `A_0..A_N` (at least through index 5).
    pub fn generate(bound: usize) -> SequenceTable {
        let len = bound.max(5) + 1;
        let mut c: Vec<Gf2Poly> = Vec::with_capacity(len);
        let mut a: Vec<Gf2Poly> = Vec::with_capacity(len);
        for n in 0..len {
            if n < 6 {
                c.push(Gf2Poly::from_limbs(vec![C_SEEDS[n]]));
                a.push(Gf2Poly::from_limbs(vec![A_SEEDS[n]]));
                continue;
            }
            let m = n - 6;
            let mut cn = c[m].mul_word(STEP_WORD);
            cn += &c[m + 5];
            cn.add_shifted(&Gf2Poly::from_limbs(vec![0b110]), m);
            let mut an = a[m].mul_word(STEP_WORD);
            an += &a[m + 5];
            c.push(cn);
            a.push(an);
        }
        SequenceTable { c, a }
    }

    pub fn bound(&self) -> usize {
        self.c.len() - 1
    }

    pub fn c(&self, n: usize) -> &Gf2Poly {
        &self.c[n]
    }

    pub fn a(&self, n: usize) -> &Gf2Poly {
        &self.a[n]
    }

    /// First `n` with `C_n != A_n + t^n`.
    pub fn first_a_c_mismatch(&self) -> Option<usize> {
        (0..self.c.len()).find(|&n| {
            let mut an = self.a[n].clone();
            an.flip_bit(n);
            an != self.c[n]
        })
    }

    /// `phi(g) = sum_{k in supp g} C_k`.
    pub fn phi(&self, g: &Gf2Poly) -> Result<Gf2Poly> {
        if let Some(d) = g.degree() {
            if d > self.bound() {
                return Err(Error::TableTooSmall {
                    have: self.bound(),
                    need: d,
                });
            }
        }
        let mut out = Gf2Poly::zero();
        for k in g.iter_exponents() {
            out += &self.c[k];
        }
        Ok(out)
    }

    /// Degree law for `C_n`: exact `n-1` for `n = 1, 5 (mod 6)`, exact
    /// `n-2` for `n = 3, 4`, at most `n-2` for `n = 0, 2`.
    pub fn check_degree_law(&self, n: usize) -> std::result::Result<(), String> {
        let d = self.c[n].degree().map(|d| d as i64);
        let n_i = n as i64;
        let ok = match n % 6 {
            1 | 5 => d == Some(n_i - 1),
            3 | 4 => d == Some(n_i - 2),
            _ => self.c[n].degree_at_most(n_i - 2),
        };
        if ok {
            Ok(())
        } else {
            Err(format!("deg C_{n} = {d:?} violates the degree law"))
        }
    }

    fn sum(&self, idx: &[usize]) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        for &k in idx {
            out += &self.c[k];
        }
        out
    }

    /// Degree-window identities relating `C_n` to earlier terms:
    /// shift-by-24/48 approximations and the residue-class bounds of the
    /// `n mod 12 / 24` families.
    pub fn check_degree_windows(&self, n: usize) -> std::result::Result<(), String> {
        let ni = n as i64;
        let mut fails = Vec::new();
        let mut check = |label: &str, p: Gf2Poly, bound: i64| {
            if !p.degree_at_most(bound) {
                fails.push(format!("{label}: degree {:?} > {bound}", p.degree()));
            }
        };
        if n >= 24 {
            let mut p = self.c[n - 24].shl(24);
            p += &self.c[n];
            let bound = if n.is_multiple_of(2) { ni - 6 } else { ni - 5 };
            check("C_n + t^24 C_{n-24}", p, bound);
        }
        if n >= 48 {
            let mut p = self.c[n - 48].shl(48);
            p += &self.c[n];
            check("C_n + t^48 C_{n-48}", p, ni - 9);
        }
        if n.is_multiple_of(12) {
            check("C_n (n=0 mod 12)", self.c[n].clone(), ni - 4);
        }
        if n % 12 == 2 {
            check("C_n + C_{n-1} (n=2 mod 12)", self.sum(&[n, n - 1]), ni - 4);
        }
        if n % 24 == 8 {
            check("C_n (n=8 mod 24)", self.c[n].clone(), ni - 6);
        }
        if n % 24 == 20 {
            check("C_n + C_{n-2} (n=20 mod 24)", self.sum(&[n, n - 2]), ni - 6);
        }
        if n % 24 == 6 {
            let six: Vec<usize> = (0..6).map(|k| n - k).collect();
            check("C_n + ... + C_{n-5} (n=6 mod 24)", self.sum(&six), ni - 8);
            check(
                "C_n + ... + C_{n-3} (n=6 mod 24)",
                self.sum(&[n, n - 1, n - 2, n - 3]),
                ni - 8,
            );
        }
        if n % 24 == 18 {
            check("C_n + C_{n-1} (n=18 mod 24)", self.sum(&[n, n - 1]), ni - 8);
            check(
                "C_n + C_{n-1} + C_{n-4} + C_{n-5} (n=18 mod 24)",
                self.sum(&[n, n - 1, n - 4, n - 5]),
                ni - 8,
            );
        }
        if fails.is_empty() {
            Ok(())
        } else {
            Err(fails.join("; "))
        }
    }
}

/// Which canonical representatives a [`KernelBasis`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Fully reduced row echelon: no `g_n` has a coefficient at another
    /// kernel degree.
    ReducedEchelon,
    /// Reduced echelon, then corrected in the top window of each `g_n` to
    /// the residue-class pattern (mod 12 / 24 / 48).
    Lemma34,
}

/// Kernel elements `g_n`, one per `n = 0, 2 (mod 6)` up to the bound;
/// `g_n` has degree exactly `n`.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    bound: usize,
    elems: BTreeMap<usize, Gf2Poly>,
    normalization: Normalization,
}

/// One step of the streaming elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelStep {
    /// `C_n` is independent of `C_0..C_{n-1}`; its leading degree after
    /// reduction is recorded.
    Independent { n: usize, pivot: usize },
    /// `C_n` is a combination of earlier terms; `g` is the reduced kernel
    /// element of degree `n`.
    Dependent { n: usize, g: Gf2Poly },
}

/// Streaming echelon reduction of `C_0, C_1, ...`.
///
/// The span pivots are kept in echelon form keyed by leading degree and
/// tagged with the combination of `C_k` that produced them. Kernel
/// elements are kept fully reduced against each other.
pub struct KernelBuilder<'a> {
    table: &'a SequenceTable,
    span: Echelon,
    kernel: Echelon,
    next: usize,
}

impl<'a> KernelBuilder<'a> {
    pub fn new(table: &'a SequenceTable) -> Self {
        Self {
            table,
            span: Echelon::new(),
            kernel: Echelon::new(),
            next: 0,
        }
    }

    pub fn next_index(&self) -> usize {
        self.next
    }

    /// Processes `C_n` for the next `n`, checking that a dependency occurs
    /// exactly when `n = 0, 2 (mod 6)`.
    pub fn step(&mut self) -> Result<KernelStep> {
        let n = self.next;
        if n > self.table.bound() {
            return Err(Error::TableTooSmall {
                have: self.table.bound(),
                need: n,
            });
        }
        self.next += 1;
        let out = match self
            .span
            .insert(self.table.c(n).clone(), Gf2Poly::monomial(n))
        {
            Insert::Pivot(pivot) => KernelStep::Independent { n, pivot },
            Insert::Dependent(tag) => {
                let (g, _) = self.kernel.reduce_full(tag, Gf2Poly::zero());
                debug_assert_eq!(g.degree(), Some(n));
                self.kernel.insert(g.clone(), Gf2Poly::zero());
                KernelStep::Dependent { n, g }
            }
        };
        let expect_dependent = is_kernel_degree(n);
        let got_dependent = matches!(out, KernelStep::Dependent { .. });
        if expect_dependent != got_dependent {
            let detail = if expect_dependent {
                format!("C_{n} is independent of C_0..C_{}", n.saturating_sub(1))
            } else {
                format!("C_{n} is a combination of earlier terms")
            };
            return Err(Error::TheoremViolated {
                n,
                detail,
                state_hash: self.state_hash(),
            });
        }
        Ok(out)
    }

    /// SHA-256 over the pivot degrees and rows, hex, 16 digits.
    pub fn state_hash(&self) -> String {
        let mut h = Sha256::new();
        for (d, row) in self.span.pivots() {
            h.update((d as u64).to_le_bytes());
            for l in row.value.limbs() {
                h.update(l.to_le_bytes());
            }
        }
        let digest = h.finalize();
        let mut s = String::new();
        for b in &digest[..8] {
            let _ = write!(s, "{b:02x}");
        }
        s
    }
}

impl KernelBasis {
    /// Reduced-echelon basis of `ker phi` restricted to degrees `<= bound`.
    pub fn compute(table: &SequenceTable, bound: usize) -> Result<KernelBasis> {
        let mut builder = KernelBuilder::new(table);
        let mut elems = BTreeMap::new();
        for _ in 0..=bound {
            if let KernelStep::Dependent { n, g } = builder.step()? {
                elems.insert(n, g);
            }
        }
        Ok(KernelBasis {
            bound,
            elems,
            normalization: Normalization::ReducedEchelon,
        })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn get(&self, n: usize) -> Option<&Gf2Poly> {
        self.elems.get(&n)
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.elems.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Gf2Poly)> {
        self.elems.iter().map(|(&n, g)| (n, g))
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// The subfamily with `n <= bound`.
    pub fn restricted(&self, bound: usize) -> KernelBasis {
        KernelBasis {
            bound: bound.min(self.bound),
            elems: self.elems.range(..=bound).map(|(&n, g)| (n, g.clone())).collect(),
            normalization: self.normalization,
        }
    }

    /// `S` with `C_n = sum_{k in S} C_k`, read off `g_n`.
    pub fn express_c(&self, n: usize) -> Result<Vec<usize>> {
        if !is_kernel_degree(n) {
            return Err(Error::NotApplicable { n });
        }
        let g = self.elems.get(&n).ok_or(Error::TableTooSmall {
            have: self.bound,
            need: n,
        })?;
        Ok(g.iter_exponents().filter(|&k| k != n).collect())
    }

    /// Re-chooses each `g_n` so that its top window matches the pattern of
    /// its residue class, by adding lower kernel elements at window degrees.
    pub fn normalize_lemma34(&self) -> Result<KernelBasis> {
        let elems = self
            .elems
            .keys()
            .map(|&n| self.normalized_element(n).map(|g| (n, g)))
            .collect::<Result<_>>()?;
        Ok(KernelBasis {
            bound: self.bound,
            elems,
            normalization: Normalization::Lemma34,
        })
    }

    /// The normalized form of one `g_n`, from this (reduced) basis.
    pub fn normalized_element(&self, n: usize) -> Result<Gf2Poly> {
        let mut g = self
            .elems
            .get(&n)
            .ok_or(Error::TableTooSmall {
                have: self.bound,
                need: n,
            })?
            .clone();
        let (width, ones) = window_pattern(n);
        for k in 1..width {
            let Some(d) = n.checked_sub(k) else { break };
            if g.bit(d) == ones.contains(&k) {
                continue;
            }
            match self.elems.get(&d) {
                Some(gd) => g += gd,
                None => return Err(Error::LemmaViolated { n, degree: d }),
            }
        }
        Ok(g)
    }

    /// Checks a stored `g_n` against its window pattern.
    pub fn check_window(&self, n: usize) -> Result<()> {
        let g = self.elems.get(&n).ok_or(Error::TableTooSmall {
            have: self.bound,
            need: n,
        })?;
        check_window(n, g)
    }

    pub fn check_approximation(&self, n: usize) -> std::result::Result<(), String> {
        match self.elems.get(&n) {
            Some(g) => check_approximation(n, g),
            None => Err(format!("no g_{n} stored")),
        }
    }
}

/// `g` has degree `n` and its window matches the pattern of `n`.
pub fn check_window(n: usize, g: &Gf2Poly) -> Result<()> {
    if g.degree() != Some(n) {
        return Err(Error::LemmaViolated { n, degree: n });
    }
    let (width, ones) = window_pattern(n);
    for k in 1..width {
        let Some(d) = n.checked_sub(k) else { break };
        if g.bit(d) != ones.contains(&k) {
            return Err(Error::LemmaViolated { n, degree: d });
        }
    }
    Ok(())
}

/// Approximation of a normalized `g_n` by a power of `t^6 + t^5`:
/// returns `(g_n + (t^6+t^5)^{2m} X, bound)` where
/// `X = 1, t^6+...+t, t^2+t, t^8` for `n = 12m, 12m+6, 12m+2, 12m+8`
/// and `bound = 12m-2, 12m, 12m, 12m+4`.
pub fn approximation_error(n: usize, g: &Gf2Poly) -> Option<(Gf2Poly, i64)> {
    let m = n / 12;
    let (x, bound): (u64, i64) = match n % 12 {
        0 => (0b1, 12 * m as i64 - 2),
        6 => (0b111_1110, 12 * m as i64),
        2 => (0b110, 12 * m as i64),
        8 => (0b1_0000_0000, 12 * m as i64 + 4),
        _ => return None,
    };
    // (t^6 + t^5)^{2m} = (t^12 + t^10)^m
    let w2 = Gf2Poly::from_exponents([12, 10]).pow(m as u64);
    let mut err = w2.mul_word(x);
    err += g;
    Some((err, bound))
}

pub fn check_approximation(n: usize, g: &Gf2Poly) -> std::result::Result<(), String> {
    match approximation_error(n, g) {
        Some((err, bound)) if err.degree_at_most(bound) => Ok(()),
        Some((err, bound)) => Err(format!(
            "g_{n} approximation error has degree {:?} > {bound}",
            err.degree()
        )),
        None => Err(format!("n = {n} is not a kernel degree")),
    }
}

/// `(w, ones)`: the coefficients of `t^{n-k}` for `1 <= k < w` are
/// prescribed, equal to 1 exactly for `k` in `ones`.
pub fn window_pattern(n: usize) -> (usize, &'static [usize]) {
    match (n % 12, n % 24, n % 48) {
        (0, _, _) => (2, &[]),
        (2, _, _) => (2, &[1]),
        (_, 8, _) => (4, &[]),
        (_, 20, _) => (4, &[2]),
        (_, _, 6) => (6, &[1, 2, 3, 4, 5]),
        (_, _, 18) => (6, &[1]),
        (_, _, 30) => (6, &[1, 2, 3]),
        (_, _, 42) => (6, &[1, 4, 5]),
        _ => (1, &[]),
    }
}

/// `K_m = ker(U + I)` on `L* = {(r^2+r) g(r^2) : deg g <= 6m+5}`, with the
/// companion comparison of `ker (U+I)^2` on `L*` and on its subspace `L`.
#[derive(Debug, Clone)]
pub struct KmKernel {
    pub m: usize,
    pub dimension: usize,
    /// Basis of `K_m` in the `g`-variable.
    pub basis: Vec<Gf2Poly>,
    /// `dim ker (U+I)^2` on `L*` and on `L`.
    pub square_kernel_dims: (usize, usize),
}

/// `g`-forms of `u_0, u_1, u_2, u_4, u_5`, computed from their definitions
/// in terms of `F` and `G`.
pub fn u_generators() -> [(usize, PolyInR); 5] {
    let (f, g) = (PolyInR::f(), PolyInR::g());
    let s = PolyInR::r2_plus_r();
    [
        (0, s.clone()),
        (1, s.pow(3).add(&g)),
        (2, g.clone()),
        (4, s.pow(2).mul(&g)),
        (5, s.pow(4).mul(&g).add(&s.mul(&f).mul(&g))),
    ]
}

/// Computes `K_m` through `phi` (in `g`-coordinates `U + I` is `phi`).
pub fn km_kernel(table: &SequenceTable, m: usize) -> Result<KmKernel> {
    let top = 6 * m + 5;
    if table.bound() < top {
        return Err(Error::TableTooSmall {
            have: table.bound(),
            need: top,
        });
    }
    let columns: Vec<Gf2Poly> = (0..=top).map(|k| table.c(k).clone()).collect();
    let basis = linalg::kernel(&columns);
    let dimension = basis.len();
    if dimension != 2 * m + 2 {
        return Err(Error::DimensionViolation {
            m,
            detail: format!("dim K_m = {dimension}, expected {}", 2 * m + 2),
        });
    }

    // (U+I)^2 on L*: e_k -> phi(C_k).
    let sq_columns: Vec<Gf2Poly> = columns
        .iter()
        .map(|c| table.phi(c))
        .collect::<Result<_>>()?;
    let ker_star = linalg::kernel(&sq_columns);

    // (U+I)^2 on L = span{u_i G^{2n} : n <= m}.
    let g2 = PolyInR::g().pow(2);
    let mut l_vectors = Vec::new();
    for (_, u) in u_generators() {
        let mut cur = u;
        for _ in 0..=m {
            let g = MOddElem::from_r(&cur)?.g;
            l_vectors.push(g);
            cur = cur.mul(&g2);
        }
    }
    let l_images: Vec<Gf2Poly> = l_vectors
        .iter()
        .map(|v| table.phi(&table.phi(v)?))
        .collect::<Result<_>>()?;
    let ker_l: Vec<Gf2Poly> = linalg::kernel(&l_images)
        .into_iter()
        .map(|combo| {
            let mut v = Gf2Poly::zero();
            for i in combo.iter_exponents() {
                v += &l_vectors[i];
            }
            v
        })
        .collect();

    let mut span_l = Echelon::new();
    for v in &ker_l {
        span_l.insert(v.clone(), Gf2Poly::zero());
    }
    let dims = (ker_star.len(), span_l.rank());
    if dims.0 != 4 * m + 4 || dims.1 != dims.0 || !ker_star.iter().all(|v| span_l.contains(v)) {
        return Err(Error::DimensionViolation {
            m,
            detail: format!(
                "ker (U+I)^2: dim on L* = {}, dim on L = {}, expected {}",
                dims.0,
                dims.1,
                4 * m + 4
            ),
        });
    }
    Ok(KmKernel {
        m,
        dimension,
        basis,
        square_kernel_dims: dims,
    })
}
