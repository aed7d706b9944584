//! Round trips through the C ABI, checked against the Rust API.

use std::ptr;

use hecke2::modforms::{self, ThetaKind};
use hecke2::recurrence::{KernelBasis, SequenceTable};
use hecke2::semilinear::{apply_u, PolyInR};
use hecke2::Gf2Poly;
use hecke2_ffi::*;

fn poly(exps: &[u64]) -> *mut Hecke2Poly {
    let mut out = ptr::null_mut();
    let st = unsafe { hecke2_poly_from_exponents(exps.as_ptr(), exps.len(), &mut out) };
    assert_eq!(st, Hecke2Status::Ok);
    out
}

fn exps(p: *const Hecke2Poly) -> Vec<u64> {
    let mut len = 0usize;
    unsafe {
        assert_eq!(hecke2_poly_exponents(p, ptr::null_mut(), 0, &mut len), Hecke2Status::Ok);
        let mut buf = vec![0u64; len];
        assert_eq!(hecke2_poly_exponents(p, buf.as_mut_ptr(), len, &mut len), Hecke2Status::Ok);
        buf
    }
}

fn series_exps(s: *const Hecke2Series) -> Vec<u64> {
    let mut len = 0usize;
    unsafe {
        assert_eq!(hecke2_series_exponents(s, ptr::null_mut(), 0, &mut len), Hecke2Status::Ok);
        let mut buf = vec![0u64; len];
        assert_eq!(hecke2_series_exponents(s, buf.as_mut_ptr(), len, &mut len), Hecke2Status::Ok);
        buf
    }
}

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let n = unsafe { hecke2_last_error(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

fn to_u64(v: Vec<usize>) -> Vec<u64> {
    v.into_iter().map(|e| e as u64).collect()
}

#[test]
fn poly_arithmetic() {
    let a = poly(&[0, 1]);
    let b = poly(&[1, 3]);
    let mut s = ptr::null_mut();
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(hecke2_poly_add(a, b, &mut s), Hecke2Status::Ok);
        assert_eq!(hecke2_poly_mul(a, b, &mut m), Hecke2Status::Ok);
        assert_eq!(hecke2_poly_degree(m), 4);
    }
    assert_eq!(exps(s), vec![0, 3]);
    // (1+t)(t+t^3) = t + t^2 + t^3 + t^4
    assert_eq!(exps(m), vec![1, 2, 3, 4]);
    unsafe {
        for p in [a, b, s, m] {
            hecke2_poly_free(p);
        }
    }
}

#[test]
fn zero_degree_and_null_handles() {
    let z = poly(&[]);
    unsafe {
        assert_eq!(hecke2_poly_degree(z), -1);
        assert_eq!(hecke2_poly_degree(ptr::null()), -1);
        hecke2_poly_free(z);
        hecke2_poly_free(ptr::null_mut());
        let mut out = ptr::null_mut();
        assert_eq!(hecke2_poly_add(ptr::null(), ptr::null(), &mut out), Hecke2Status::NullPointer);
        assert!(out.is_null());
    }
    assert!(last_error().contains("null"));
}

#[test]
fn unsorted_exponents_are_rejected() {
    let e = [3u64, 1];
    let mut out = ptr::null_mut();
    let st = unsafe { hecke2_poly_from_exponents(e.as_ptr(), e.len(), &mut out) };
    assert_eq!(st, Hecke2Status::MalformedInput);
    assert!(out.is_null());
    assert!(last_error().contains("ascending"));
}

#[test]
fn apply_u_matches_core() {
    let e = [1u64, 2, 5, 9, 17, 40];
    let p = poly(&e);
    let mut out = ptr::null_mut();
    unsafe { assert_eq!(hecke2_apply_u(p, &mut out), Hecke2Status::Ok) };
    let want = apply_u(&PolyInR::new(Gf2Poly::from_exponents(e.iter().map(|&x| x as usize))));
    assert_eq!(exps(out), to_u64(want.poly().exponents()));
    unsafe {
        hecke2_poly_free(p);
        hecke2_poly_free(out);
    }
}

#[test]
fn sequences_and_kernel_match_core() {
    let mut t = ptr::null_mut();
    unsafe { assert_eq!(hecke2_sequences_new(200, &mut t), Hecke2Status::Ok) };
    let table = SequenceTable::generate(200);
    for n in [0usize, 5, 6, 8, 12, 200] {
        let mut c = ptr::null_mut();
        unsafe { assert_eq!(hecke2_sequences_c(t, n, &mut c), Hecke2Status::Ok) };
        assert_eq!(exps(c), to_u64(table.c(n).exponents()), "C_{n}");
        unsafe { hecke2_poly_free(c) };
    }
    let mut c = ptr::null_mut();
    unsafe { assert_eq!(hecke2_sequences_c(t, 201, &mut c), Hecke2Status::TableTooSmall) };

    for normalized in [0, 1] {
        let mut k = ptr::null_mut();
        unsafe { assert_eq!(hecke2_kernel_basis_new(t, 200, normalized, &mut k), Hecke2Status::Ok) };
        let mut want = KernelBasis::compute(&table, 200).unwrap();
        if normalized != 0 {
            want = want.normalize_lemma34().unwrap();
        }
        assert_eq!(unsafe { hecke2_kernel_basis_len(k) }, want.len());
        for (n, g) in want.iter() {
            let mut out = ptr::null_mut();
            unsafe { assert_eq!(hecke2_kernel_basis_get(k, n, &mut out), Hecke2Status::Ok) };
            assert_eq!(exps(out), to_u64(g.exponents()), "g_{n}");
            unsafe { hecke2_poly_free(out) };
        }
        let mut out = ptr::null_mut();
        unsafe { assert_eq!(hecke2_kernel_basis_get(k, 7, &mut out), Hecke2Status::NotApplicable) };
        unsafe { hecke2_kernel_basis_free(k) };
    }
    unsafe { hecke2_sequences_free(t) };
}

#[test]
fn series_operations_match_core() {
    let mut d = ptr::null_mut();
    unsafe { assert_eq!(hecke2_theta(Hecke2Theta::D, 500, &mut d), Hecke2Status::Ok) };
    assert_eq!(unsafe { hecke2_series_precision(d) }, 500);
    let want = modforms::gen_theta(ThetaKind::D, 500);
    assert_eq!(series_exps(d), to_u64(want.bits().exponents()));

    let mut t3 = ptr::null_mut();
    let mut u = ptr::null_mut();
    unsafe {
        assert_eq!(hecke2_hecke_tp(d, 3, &mut t3), Hecke2Status::Ok);
        assert_eq!(hecke2_u5(d, &mut u), Hecke2Status::Ok);
    }
    assert_eq!(series_exps(t3), to_u64(modforms::hecke_tp(&want, 3).unwrap().bits().exponents()));
    assert_eq!(series_exps(u), to_u64(modforms::u5(&want).bits().exponents()));

    let mut bad = ptr::null_mut();
    unsafe { assert_eq!(hecke2_hecke_tp(d, 5, &mut bad), Hecke2Status::BadPrime) };
    unsafe { assert_eq!(hecke2_hecke_tp(d, 9, &mut bad), Hecke2Status::BadPrime) };
    assert!(bad.is_null());

    let f = poly(&[1, 2, 5, 6]);
    let mut s = ptr::null_mut();
    unsafe { assert_eq!(hecke2_series_of_poly(f, 300, &mut s), Hecke2Status::Ok) };
    let fr = PolyInR::new(Gf2Poly::from_exponents([1, 2, 5, 6]));
    assert_eq!(series_exps(s), to_u64(modforms::series_of_poly(&fr, 300).bits().exponents()));
    unsafe {
        for x in [d, t3, u, s] {
            hecke2_series_free(x);
        }
        hecke2_poly_free(f);
    }
}

#[test]
fn exponent_buffer_reports_full_length_when_short() {
    let p = poly(&[0, 4, 9]);
    let mut buf = [u64::MAX; 2];
    let mut len = 0usize;
    unsafe { assert_eq!(hecke2_poly_exponents(p, buf.as_mut_ptr(), 2, &mut len), Hecke2Status::Ok) };
    assert_eq!(len, 3);
    assert_eq!(buf, [0, 4]);
    unsafe { hecke2_poly_free(p) };
}

#[test]
fn status_names_are_nul_terminated() {
    let name = unsafe { std::ffi::CStr::from_ptr(hecke2_status_name(Hecke2Status::BadPrime)) };
    assert_eq!(name.to_str().unwrap(), "bad prime");
}
