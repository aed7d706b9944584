//! Campaign runners. Each one maps a module check over an index range and
//! streams one row per item, in item order, whatever the thread count.

use std::collections::BTreeSet;
use std::io;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::report::{ReportRow, Sink};
use crate::adapted::{adapted_with_growth, extract_u, wa_check, HeckeSetup};
use crate::error::{Error, Result};
use crate::gf2poly::Gf2Poly;
use crate::modforms::verify_u_agreement;
use crate::nmod::{check_projection, verify_projection, ProjectionRow};
use crate::recurrence::{
    check_approximation, check_window, is_kernel_degree, km_kernel, KernelBasis, KernelBuilder, KernelStep,
    SequenceTable,
};
use crate::semilinear::u_plus_i_on_modd;

/// Items per parallel batch; rows of a batch are emitted together.
const BATCH: usize = 256;

/// Bound below which the `C_n` table is cross-checked against `U` directly.
const DIRECT_CROSS_CHECK: usize = 2000;

/// Starting basis bound and cap for the adapted-basis search.
const ADAPTED_START: usize = 16;
const ADAPTED_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    Recurrence,
    Kernel,
    Normalize,
    Projection,
    UAgreement,
    Adapted,
    HeckeU,
    Wa,
}

impl Target {
    pub fn id(self) -> &'static str {
        match self {
            Target::Recurrence => "recurrence",
            Target::Kernel => "kernel",
            Target::Normalize => "normalize",
            Target::Projection => "projection",
            Target::UAgreement => "u-agreement",
            Target::Adapted => "adapted",
            Target::HeckeU => "hecke-u",
            Target::Wa => "wa",
        }
    }
}

/// A fully resolved campaign: defaults filled in, primes validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Campaign {
    pub target: Target,
    pub max_n: usize,
    pub max_m: Option<usize>,
    pub depth: usize,
    pub primes: Vec<u64>,
    pub precision: Option<usize>,
}

impl Campaign {
    pub fn new(target: Target) -> Self {
        let max_n = match target {
            Target::Recurrence | Target::Kernel => 10_000,
            Target::Normalize => 4800,
            Target::UAgreement => 100,
            Target::Wa => 48,
            _ => 0,
        };
        let max_m = match target {
            Target::Projection => Some(100),
            _ => None,
        };
        Self {
            target,
            max_n,
            max_m,
            depth: 6,
            primes: vec![11, 13, 17, 19, 23, 29, 31],
            precision: None,
        }
    }
}

fn timed<F: FnOnce() -> ReportRow>(f: F) -> ReportRow {
    let t = Instant::now();
    let row = f();
    row.with_ms(t.elapsed().as_secs_f64() * 1e3)
}

fn row_of(campaign: &str, item: Value, r: Result<Value>) -> ReportRow {
    match r {
        Ok(w) => ReportRow::pass(campaign, item, w),
        Err(e) => ReportRow::fail(campaign, item, &e),
    }
}

/// Runs `check` over `items` in parallel batches, emitting in order.
fn par_rows<T, F>(sink: &mut Sink, items: &[T], check: F) -> io::Result<()>
where
    T: Sync,
    F: Fn(&T) -> ReportRow + Sync,
{
    for batch in items.chunks(BATCH) {
        let rows: Vec<ReportRow> = batch.par_iter().map(|it| timed(|| check(it))).collect();
        for row in &rows {
            sink.push(row)?;
        }
    }
    Ok(())
}

/// Short digest of an exponent list, for pass witnesses of large sets.
fn digest(exps: &[usize]) -> String {
    let mut h = Sha256::new();
    for e in exps {
        h.update((*e as u64).to_le_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Full list when short, size and digest otherwise.
fn exps_witness(exps: &[usize]) -> Value {
    if exps.len() <= 32 {
        json!(exps)
    } else {
        json!({ "len": exps.len(), "max": exps.last(), "sha": digest(exps) })
    }
}

pub fn run(c: &Campaign, sink: &mut Sink) -> io::Result<()> {
    match c.target {
        Target::Recurrence => recurrence(c, sink),
        Target::Kernel => kernel(c, sink),
        Target::Normalize => normalize(c, sink),
        Target::Projection => projection(c, sink),
        Target::UAgreement => u_agreement(c, sink),
        Target::Adapted => adapted(c, sink),
        Target::HeckeU => hecke_u(c, sink),
        Target::Wa => wa(c, sink),
    }
}

/// `(n, C_n, A_n)` exponents for the seeds, and `C_8`, `C_12`.
const GOLDEN: [(usize, &[usize], Option<&[usize]>); 8] = [
    (0, &[], Some(&[0])),
    (1, &[0], Some(&[1, 0])),
    (2, &[0], Some(&[2, 0])),
    (3, &[1], Some(&[3, 1])),
    (4, &[2], Some(&[4, 2])),
    (5, &[4, 2, 1], Some(&[5, 4, 2, 1])),
    (8, &[2], None),
    (12, &[8, 4, 2], None),
];

fn recurrence_item(table: &SequenceTable, n: usize) -> std::result::Result<Value, String> {
    let c = table.c(n);
    let mut a_plus = table.a(n).clone();
    a_plus.flip_bit(n);
    if &a_plus != c {
        return Err(format!("C_{n} != A_{n} + t^{n}"));
    }
    if let Some(&(_, ce, ae)) = GOLDEN.iter().find(|g| g.0 == n) {
        if c != &Gf2Poly::from_exponents(ce.iter().copied()) {
            return Err(format!("C_{n} = {} differs from the seed", c.format_exponents()));
        }
        if let Some(ae) = ae {
            if table.a(n) != &Gf2Poly::from_exponents(ae.iter().copied()) {
                return Err(format!("A_{n} = {} differs from the seed", table.a(n).format_exponents()));
            }
        }
    }
    table.check_degree_law(n)?;
    table.check_degree_windows(n)?;
    if n <= DIRECT_CROSS_CHECK {
        match u_plus_i_on_modd(n) {
            Ok(direct) if &direct == c => {}
            Ok(direct) => return Err(format!("(U+I) route gives {}", direct.format_exponents())),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(json!({ "deg": c.degree() }))
}

fn recurrence(c: &Campaign, sink: &mut Sink) -> io::Result<()> {
    let name = sink.campaign().to_string();
    let bound = c.max_n.max(6 * c.max_m.unwrap_or(0) + 5);
    let table = SequenceTable::generate(bound);
    let items: Vec<usize> = (0..=c.max_n).collect();
    par_rows(sink, &items, |&n| {
        let r = recurrence_item(&table, n).map_err(|detail| Error::TheoremViolated {
            n,
            detail,
            state_hash: String::new(),
        });
        row_of(&name, json!(n), r)
    })?;
    if let Some(max_m) = c.max_m {
        let items: Vec<usize> = (0..=max_m).collect();
        par_rows(sink, &items, |&m| {
            let r = km_kernel(&table, m).map(|k| {
                json!({ "dim": k.dimension, "square_dims": [k.square_kernel_dims.0, k.square_kernel_dims.1] })
            });
            row_of(&name, json!(format!("K_{m}")), r)
        })?;
    }
    Ok(())
}

fn kernel(c: &Campaign, sink: &mut Sink) -> io::Result<()> {
    let name = sink.campaign().to_string();
    let table = SequenceTable::generate(c.max_n);
    let mut builder = KernelBuilder::new(&table);
    let mut t = Instant::now();
    while builder.next_index() <= c.max_n {
        match builder.step() {
            Ok(KernelStep::Independent { .. }) => {}
            Ok(KernelStep::Dependent { n, g }) => {
                let s: Vec<usize> = g.iter_exponents().filter(|&k| k != n).collect();
                let row = ReportRow::pass(&name, json!(n), json!({ "S": exps_witness(&s) }))
                    .with_ms(t.elapsed().as_secs_f64() * 1e3);
                sink.push(&row)?;
                t = Instant::now();
            }
            Err(e) => {
                let n = builder.next_index() - 1;
                sink.push(&ReportRow::fail(&name, json!(n), &e))?;
                return Ok(());
            }
        }
    }
    Ok(())
}

fn kernel_basis(bound: usize) -> Result<KernelBasis> {
    let table = SequenceTable::generate(bound);
    KernelBasis::compute(&table, bound)
}

fn normalize(c: &Campaign, sink: &mut Sink) -> io::Result<()> {
    let name = sink.campaign().to_string();
    let basis = match kernel_basis(c.max_n) {
        Ok(b) => b,
        Err(e) => return sink.push(&ReportRow::fail(&name, json!("basis"), &e)),
    };
    let items: Vec<usize> = basis.degrees().collect();
    par_rows(sink, &items, |&n| {
        let r = basis.normalized_element(n).and_then(|g| {
            check_window(n, &g)?;
            check_approximation(n, &g).map_err(|detail| Error::TheoremViolated {
                n,
                detail,
                state_hash: String::new(),
            })?;
            let top: Vec<usize> = g.iter_exponents().rev().take_while(|&k| k + 6 > n).collect();
            Ok(json!({ "top": top }))
        });
        row_of(&name, json!(n), r)
    })
}

fn projection(c: &Campaign, sink: &mut Sink) -> io::Result<()> {
    let name = sink.campaign().to_string();
    let max_m = c.max_m.unwrap_or(100);
    let basis = match kernel_basis(12 * max_m + 8).and_then(|b| b.normalize_lemma34()) {
        Ok(b) => b,
        Err(e) => return sink.push(&ReportRow::fail(&name, json!("basis"), &e)),
    };
    let items: Vec<usize> = (0..=max_m).collect();
    let results: Vec<(Result<Vec<ProjectionRow>>, f64)> = items
        .par_iter()
        .map(|&m| {
            let t = Instant::now();
            let r = verify_projection(m, |n| basis.get(n));
            (r, t.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut repeat = None;
    for (m, (r, ms)) in results.iter().enumerate() {
        let r = r.clone().map(|rows| {
            for row in &rows {
                if !seen.insert(row.leading) {
                    repeat = Some(row.leading);
                }
            }
            let images: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "n": r.n, "image": r.image.indices().collect::<Vec<_>>() }))
                .collect();
            json!({ "images": images })
        });
        sink.push(&row_of(&name, json!(m), r).with_ms(*ms))?;
    }
    // injectivity: the leading indices of all tested images are distinct
    let all_ok = results.iter().all(|(r, _)| r.is_ok());
    let row = match (all_ok, repeat) {
        (true, None) => ReportRow::pass(&name, json!("injective"), json!({ "images": seen.len() })),
        _ => ReportRow::fail(
            &name,
            json!("injective"),
            &Error::DimensionViolation {
                m: max_m,
                detail: format!("images not triangular with distinct leading indices (repeat {repeat:?})"),
            },
        ),
    };
    sink.push(&row)
}

fn u_agreement(c: &Campaign, sink: &mut Sink) -> io::Result<()> {
    let name = sink.campaign().to_string();
    let items: Vec<usize> = (0..=c.max_n).collect();
    par_rows(sink, &items, |&n| {
        let p = c.precision.unwrap_or(0).max(5 * (4 * n + 6));
        row_of(&name, json!(n), verify_u_agreement(n, p).map(|_| json!({ "precision": p })))
    })
}

fn cell_witness(setup: &HeckeSetup, x: &Gf2Poly) -> Value {
    let degrees: Vec<usize> = x.iter_exponents().map(|k| setup.basis.entries()[k].n).collect();
    json!(degrees)
}

fn adapted(c: &Campaign, sink: &mut Sink) -> io::Result<()> {
    let name = sink.campaign().to_string();
    let t = Instant::now();
    let (setup, ab) = match adapted_with_growth(c.depth, &[], ADAPTED_START, ADAPTED_CAP, c.precision) {
        Ok(v) => v,
        Err(e) => return sink.push(&ReportRow::fail(&name, json!("build"), &e)),
    };
    let build_ms = t.elapsed().as_secs_f64() * 1e3;
    let (m3, m7) = (&setup.matrices[&3], &setup.matrices[&7]);
    let zero = Gf2Poly::zero();
    for (k, (i, j)) in crate::adapted::AdaptedBasis::cell_order(c.depth).into_iter().enumerate() {
        let row = timed(|| {
            let x = &ab.cells[&(i, j)];
            let t3 = if i == 0 { &zero } else { &ab.cells[&(i - 1, j)] };
            let t7 = if j == 0 { &zero } else { &ab.cells[&(i, j - 1)] };
            let shifts = m3.apply(x) == *t3 && m7.apply(x) == *t7;
            let nilpotent = m3.apply_power(x, c.depth + 1).is_zero() && m7.apply_power(x, c.depth + 1).is_zero();
            let seed = (i, j) != (0, 0) || setup.basis.entries()[0].n == 0 && *x == Gf2Poly::monomial(0);
            let item = json!(format!("{i},{j}"));
            if shifts && nilpotent && seed {
                ReportRow::pass(
                    &name,
                    item,
                    json!({ "coords": cell_witness(&setup, x), "bound": setup.basis.bound() }),
                )
            } else {
                ReportRow::fail(
                    &name,
                    item,
                    &Error::NoSolution {
                        i,
                        j,
                        rank: ab.rank(),
                        unknowns: setup.basis.len(),
                    },
                )
            }
        });
        let row = if k == 0 {
            let ms = row.ms + build_ms;
            row.with_ms(ms)
        } else {
            row
        };
        sink.push(&row)?;
    }
    Ok(())
}

fn hecke_u(c: &Campaign, sink: &mut Sink) -> io::Result<()> {
    let name = sink.campaign().to_string();
    let (setup, ab) = match adapted_with_growth(c.depth, &c.primes, ADAPTED_START, ADAPTED_CAP, c.precision) {
        Ok(v) => v,
        Err(e) => return sink.push(&ReportRow::fail(&name, json!("build"), &e)),
    };
    let primes: Vec<u64> = setup.matrices.keys().copied().collect();
    par_rows(sink, &primes, |&p| {
        let m = &setup.matrices[&p];
        let r = extract_u(p, &ab, m).and_then(|u| {
            let want = match p {
                3 => Some((1, 0)),
                7 => Some((0, 1)),
                _ => None,
            };
            if let Some((a, b)) = want {
                if !u.is_monomial(a, b) {
                    return Err(Error::NotMultiplication {
                        p,
                        detail: format!("expected X^{a} Y^{b}, got {:?}", u.terms),
                    });
                }
            }
            if !m.columns[0].is_zero() {
                return Err(Error::NotMultiplication {
                    p,
                    detail: "T_p(f_0) is not zero".into(),
                });
            }
            Ok(json!({ "u": u.terms.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>() }))
        });
        row_of(&name, json!(p), r)
    })
}

fn wa(c: &Campaign, sink: &mut Sink) -> io::Result<()> {
    let name = sink.campaign().to_string();
    let bound = c.max_n.max(2);
    let setup = kernel_basis(bound)
        .and_then(|k| k.normalize_lemma34())
        .and_then(|k| HeckeSetup::build(&k, bound, &[3, 7], c.precision));
    let setup = match setup {
        Ok(s) => s,
        Err(e) => return sink.push(&ReportRow::fail(&name, json!("build"), &e)),
    };
    let t = Instant::now();
    match wa_check(&setup, c.max_n) {
        Ok(rows) => {
            let per = t.elapsed().as_secs_f64() * 1e3 / rows.len().max(1) as f64;
            for (k, w) in rows.iter().enumerate() {
                // The polynomial-side projection must agree with the image used.
                let g = &setup.basis.entries()[k].g;
                let agree = if is_kernel_degree(w.n) {
                    check_projection(w.n, g).map(|r| r.image == w.image)
                } else {
                    Ok(false)
                };
                let row = match agree {
                    Ok(true) => ReportRow::pass(
                        &name,
                        json!(w.n),
                        json!({ "image": w.image.indices().collect::<Vec<_>>(), "valuation": w.valuation }),
                    ),
                    Ok(false) => ReportRow::fail(
                        &name,
                        json!(w.n),
                        &Error::EquivarianceFailure {
                            n: w.n,
                            q: 0,
                            detail: "image differs from the polynomial-side projection".into(),
                        },
                    ),
                    Err(e) => ReportRow::fail(&name, json!(w.n), &e),
                };
                sink.push(&row.with_ms(per))?;
            }
            Ok(())
        }
        Err(e) => {
            let n = match &e {
                Error::EquivarianceFailure { n, .. } => json!(n),
                _ => json!("check"),
            };
            sink.push(&ReportRow::fail(&name, n, &e))
        }
    }
}
