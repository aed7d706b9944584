//! C ABI over `hecke2`.
//!
//! Objects cross the boundary as opaque heap handles created by a
//! `*_new` / `*_from_*` function and released by the matching `*_free`.
//! Every fallible function returns a [`Hecke2Status`]; on failure the
//! message is kept per thread and read with [`hecke2_last_error`].
//! Exponent lists are `uint64_t` arrays in ascending order.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hecke2::modforms::{self, ThetaKind};
use hecke2::recurrence::{KernelBasis, SequenceTable};
use hecke2::semilinear::{self, PolyInR};
use hecke2::{Error, Gf2Poly, Gf2Series};

/// Result codes. `Ok` is zero; each library error kind has its own code.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hecke2Status {
    Ok = 0,
    NullPointer = 1,
    Panic = 2,
    MalformedInput = 10,
    DivisionImpossible = 11,
    ShapeViolation = 12,
    NotInMOdd = 13,
    TableTooSmall = 14,
    TheoremViolated = 15,
    NotApplicable = 16,
    LemmaViolated = 17,
    DimensionViolation = 18,
    BadIndex = 19,
    NotInN2 = 20,
    ProjectionMismatch = 21,
    BadPrime = 22,
    NotInMOddSpan = 23,
    AgreementFailure = 24,
    MembershipFailure = 25,
    ClosureFailure = 26,
    NoSolution = 27,
    NotMultiplication = 28,
    EquivarianceFailure = 29,
    Config = 30,
}

impl From<&Error> for Hecke2Status {
    fn from(e: &Error) -> Self {
        use Hecke2Status as S;
        match e {
            Error::MalformedInput(_) => S::MalformedInput,
            Error::DivisionImpossible { .. } => S::DivisionImpossible,
            Error::ShapeViolation { .. } => S::ShapeViolation,
            Error::NotInMOdd(_) => S::NotInMOdd,
            Error::TableTooSmall { .. } => S::TableTooSmall,
            Error::TheoremViolated { .. } => S::TheoremViolated,
            Error::NotApplicable { .. } => S::NotApplicable,
            Error::LemmaViolated { .. } => S::LemmaViolated,
            Error::DimensionViolation { .. } => S::DimensionViolation,
            Error::BadIndex(_) => S::BadIndex,
            Error::NotInN2 { .. } => S::NotInN2,
            Error::ProjectionMismatch { .. } => S::ProjectionMismatch,
            Error::BadPrime(_) => S::BadPrime,
            Error::NotInMOddSpan { .. } => S::NotInMOddSpan,
            Error::AgreementFailure { .. } => S::AgreementFailure,
            Error::MembershipFailure { .. } => S::MembershipFailure,
            Error::ClosureFailure { .. } => S::ClosureFailure,
            Error::NoSolution { .. } => S::NoSolution,
            Error::NotMultiplication { .. } => S::NotMultiplication,
            Error::EquivarianceFailure { .. } => S::EquivarianceFailure,
            Error::Config(_) => S::Config,
        }
    }
}

/// Theta series selector for [`hecke2_theta`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hecke2Theta {
    R = 0,
    F = 1,
    G = 2,
    D = 3,
}

/// A polynomial over GF(2).
pub struct Hecke2Poly(Gf2Poly);

/// A truncated power series over GF(2).
pub struct Hecke2Series(Gf2Series);

/// The tables `C_0..C_N`, `A_0..A_N`.
pub struct Hecke2SequenceTable(SequenceTable);

/// Kernel elements `g_n` of `t^k -> C_k`.
pub struct Hecke2KernelBasis(KernelBasis);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NUL removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

/// Runs `f`, converting errors and panics to status codes.
fn guard<F: FnOnce() -> Result<(), Hecke2Status>>(f: F) -> Hecke2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Hecke2Status::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("panic inside hecke2".into());
            Hecke2Status::Panic
        }
    }
}

fn fail(e: Error) -> Hecke2Status {
    set_last_error(e.to_string());
    Hecke2Status::from(&e)
}

fn null(what: &str) -> Hecke2Status {
    set_last_error(format!("null pointer: {what}"));
    Hecke2Status::NullPointer
}

/// # Safety
/// `p` is null or a live handle of type `T`.
unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Hecke2Status> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` is null or writable.
unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Hecke2Status> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Copies up to `cap` exponents to `buf` and stores the full count in `len`.
///
/// # Safety
/// `buf` has room for `cap` values (may be null when `cap == 0`); `len` is writable.
unsafe fn write_exponents(p: &Gf2Poly, buf: *mut u64, cap: usize, len: *mut usize) -> Result<(), Hecke2Status> {
    if len.is_null() {
        return Err(null("len"));
    }
    let mut count = 0usize;
    for e in p.iter_exponents() {
        if count < cap {
            if buf.is_null() {
                return Err(null("buf"));
            }
            *buf.add(count) = e as u64;
        }
        count += 1;
    }
    *len = count;
    Ok(())
}

/// # Safety
/// `exps` points to `len` readable values (may be null when `len == 0`).
unsafe fn read_exponents(exps: *const u64, len: usize) -> Result<Vec<usize>, Hecke2Status> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if exps.is_null() {
        return Err(null("exponents"));
    }
    let e = std::slice::from_raw_parts(exps, len);
    if let Some(w) = e.windows(2).find(|w| w[0] >= w[1]) {
        let msg = format!("exponents not strictly ascending at {} then {}", w[0], w[1]);
        return Err(fail(Error::MalformedInput(msg)));
    }
    e.iter()
        .map(|&x| usize::try_from(x).map_err(|_| fail(Error::MalformedInput(format!("exponent {x} too large")))))
        .collect()
}

/// Message for the last failed call on this thread; empty if none.
/// Copies at most `cap - 1` bytes plus a terminating NUL and returns the
/// full message length.
///
/// # Safety
/// `buf` has room for `cap` bytes (may be null when `cap == 0`).
#[no_mangle]
pub unsafe extern "C" fn hecke2_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_deref().map_or(&[][..], CStr::to_bytes);
        if cap > 0 && !buf.is_null() {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn hecke2_status_name(status: Hecke2Status) -> *const c_char {
    let s: &'static str = match status {
        Hecke2Status::Ok => "ok\0",
        Hecke2Status::NullPointer => "null pointer\0",
        Hecke2Status::Panic => "panic\0",
        Hecke2Status::MalformedInput => "malformed input\0",
        Hecke2Status::DivisionImpossible => "division impossible\0",
        Hecke2Status::ShapeViolation => "shape violation\0",
        Hecke2Status::NotInMOdd => "not in M(odd)\0",
        Hecke2Status::TableTooSmall => "table too small\0",
        Hecke2Status::TheoremViolated => "theorem violated\0",
        Hecke2Status::NotApplicable => "not applicable\0",
        Hecke2Status::LemmaViolated => "lemma violated\0",
        Hecke2Status::DimensionViolation => "dimension violation\0",
        Hecke2Status::BadIndex => "bad index\0",
        Hecke2Status::NotInN2 => "not in N2\0",
        Hecke2Status::ProjectionMismatch => "projection mismatch\0",
        Hecke2Status::BadPrime => "bad prime\0",
        Hecke2Status::NotInMOddSpan => "not in M(odd) span\0",
        Hecke2Status::AgreementFailure => "agreement failure\0",
        Hecke2Status::MembershipFailure => "membership failure\0",
        Hecke2Status::ClosureFailure => "closure failure\0",
        Hecke2Status::NoSolution => "no solution\0",
        Hecke2Status::NotMultiplication => "not multiplication\0",
        Hecke2Status::EquivarianceFailure => "equivariance failure\0",
        Hecke2Status::Config => "configuration error\0",
    };
    s.as_ptr().cast()
}

// ---- polynomials ----

/// Polynomial from a strictly ascending exponent list.
///
/// # Safety
/// `exps` points to `len` values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_poly_from_exponents(exps: *const u64, len: usize, out: *mut *mut Hecke2Poly) -> Hecke2Status {
    guard(|| {
        let e = read_exponents(exps, len)?;
        put(out, Hecke2Poly(Gf2Poly::from_exponents(e)))
    })
}

/// # Safety
/// `p` is null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hecke2_poly_free(p: *mut Hecke2Poly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Degree, or -1 for the zero polynomial (also -1 on a null handle).
///
/// # Safety
/// `p` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hecke2_poly_degree(p: *const Hecke2Poly) -> i64 {
    p.as_ref().and_then(|p| p.0.degree()).map_or(-1, |d| d as i64)
}

/// # Safety
/// `p` is a live handle; see [`write_exponents`] for `buf`, `cap`, `len`.
#[no_mangle]
pub unsafe extern "C" fn hecke2_poly_exponents(p: *const Hecke2Poly, buf: *mut u64, cap: usize, len: *mut usize) -> Hecke2Status {
    guard(|| write_exponents(&borrow(p, "poly")?.0, buf, cap, len))
}

/// # Safety
/// `a`, `b` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_poly_add(a: *const Hecke2Poly, b: *const Hecke2Poly, out: *mut *mut Hecke2Poly) -> Hecke2Status {
    guard(|| {
        let s = &borrow(a, "a")?.0 + &borrow(b, "b")?.0;
        put(out, Hecke2Poly(s))
    })
}

/// # Safety
/// `a`, `b` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_poly_mul(a: *const Hecke2Poly, b: *const Hecke2Poly, out: *mut *mut Hecke2Poly) -> Hecke2Status {
    guard(|| {
        let s = borrow(a, "a")?.0.mul(&borrow(b, "b")?.0);
        put(out, Hecke2Poly(s))
    })
}

/// The semi-linear operator `U` on `Z/2[r]`; the polynomial is read in `r`.
///
/// # Safety
/// `p` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_apply_u(p: *const Hecke2Poly, out: *mut *mut Hecke2Poly) -> Hecke2Status {
    guard(|| {
        let f = PolyInR::new(borrow(p, "poly")?.0.clone());
        put(out, Hecke2Poly(semilinear::apply_u(&f).into_poly()))
    })
}

// ---- sequences and kernel ----

/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_sequences_new(bound: usize, out: *mut *mut Hecke2SequenceTable) -> Hecke2Status {
    guard(|| put(out, Hecke2SequenceTable(SequenceTable::generate(bound))))
}

/// # Safety
/// `t` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hecke2_sequences_free(t: *mut Hecke2SequenceTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// `C_n` as a new polynomial handle.
///
/// # Safety
/// `t` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_sequences_c(t: *const Hecke2SequenceTable, n: usize, out: *mut *mut Hecke2Poly) -> Hecke2Status {
    guard(|| {
        let t = &borrow(t, "table")?.0;
        if n > t.bound() {
            return Err(fail(Error::TableTooSmall { have: t.bound(), need: n }));
        }
        put(out, Hecke2Poly(t.c(n).clone()))
    })
}

/// Kernel basis for degrees `<= bound`; `normalized != 0` selects the
/// window-normalized representatives, otherwise reduced echelon form.
///
/// # Safety
/// `t` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_kernel_basis_new(
    t: *const Hecke2SequenceTable,
    bound: usize,
    normalized: i32,
    out: *mut *mut Hecke2KernelBasis,
) -> Hecke2Status {
    guard(|| {
        let t = &borrow(t, "table")?.0;
        let mut k = KernelBasis::compute(t, bound).map_err(fail)?;
        if normalized != 0 {
            k = k.normalize_lemma34().map_err(fail)?;
        }
        put(out, Hecke2KernelBasis(k))
    })
}

/// # Safety
/// `k` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hecke2_kernel_basis_free(k: *mut Hecke2KernelBasis) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Number of stored `g_n` (0 on a null handle).
///
/// # Safety
/// `k` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hecke2_kernel_basis_len(k: *const Hecke2KernelBasis) -> usize {
    k.as_ref().map_or(0, |k| k.0.len())
}

/// `g_n` as a new polynomial handle; `NotApplicable` unless `n = 0, 2 (mod 6)`.
///
/// # Safety
/// `k` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_kernel_basis_get(k: *const Hecke2KernelBasis, n: usize, out: *mut *mut Hecke2Poly) -> Hecke2Status {
    guard(|| {
        let k = &borrow(k, "basis")?.0;
        if !hecke2::recurrence::is_kernel_degree(n) {
            return Err(fail(Error::NotApplicable { n }));
        }
        let g = k.get(n).ok_or_else(|| fail(Error::TableTooSmall { have: k.bound(), need: n }))?;
        put(out, Hecke2Poly(g.clone()))
    })
}

// ---- series ----

/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_theta(kind: Hecke2Theta, precision: usize, out: *mut *mut Hecke2Series) -> Hecke2Status {
    let kind = match kind {
        Hecke2Theta::R => ThetaKind::R,
        Hecke2Theta::F => ThetaKind::F,
        Hecke2Theta::G => ThetaKind::G,
        Hecke2Theta::D => ThetaKind::D,
    };
    guard(|| put(out, Hecke2Series(modforms::gen_theta(kind, precision))))
}

/// The series of a polynomial in `r`, to the given precision.
///
/// # Safety
/// `p` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_series_of_poly(p: *const Hecke2Poly, precision: usize, out: *mut *mut Hecke2Series) -> Hecke2Status {
    guard(|| {
        let f = PolyInR::new(borrow(p, "poly")?.0.clone());
        put(out, Hecke2Series(modforms::series_of_poly(&f, precision)))
    })
}

/// # Safety
/// `s` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hecke2_series_free(s: *mut Hecke2Series) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of known coefficients (0 on a null handle).
///
/// # Safety
/// `s` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hecke2_series_precision(s: *const Hecke2Series) -> usize {
    s.as_ref().map_or(0, |s| s.0.precision())
}

/// Exponents with coefficient 1 below the precision.
///
/// # Safety
/// `s` is a live handle; see [`hecke2_poly_exponents`] for the buffer.
#[no_mangle]
pub unsafe extern "C" fn hecke2_series_exponents(s: *const Hecke2Series, buf: *mut u64, cap: usize, len: *mut usize) -> Hecke2Status {
    guard(|| write_exponents(borrow(s, "series")?.0.bits(), buf, cap, len))
}

/// `T_p`; `BadPrime` unless `p` is an odd prime other than 5.
///
/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_hecke_tp(s: *const Hecke2Series, p: u64, out: *mut *mut Hecke2Series) -> Hecke2Status {
    guard(|| {
        let r = modforms::hecke_tp(&borrow(s, "series")?.0, p).map_err(fail)?;
        put(out, Hecke2Series(r))
    })
}

/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hecke2_u5(s: *const Hecke2Series, out: *mut *mut Hecke2Series) -> Hecke2Status {
    guard(|| put(out, Hecke2Series(modforms::u5(&borrow(s, "series")?.0))))
}
