use std::ffi::CStr;
use std::ptr;

use bandkern_ffi::*;

fn harmonic(p: f64) -> BkWeights {
    BkWeights {
        kind: BkWeightKind::Harmonic,
        p,
        offset: 2.0,
    }
}

fn angles(fr: &[(i64, u64)], w: BkWeights) -> *mut BkSpace {
    let nums: Vec<i64> = fr.iter().map(|f| f.0).collect();
    let dens: Vec<u64> = fr.iter().map(|f| f.1).collect();
    let mut s = ptr::null_mut();
    let st = unsafe { bk_space_new_angles(nums.as_ptr(), dens.as_ptr(), fr.len(), w, &mut s) };
    assert_eq!(st, BkStatus::Ok, "{}", last_error());
    assert!(!s.is_null());
    s
}

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    unsafe {
        bk_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn c(re: f64, im: f64) -> BkComplex {
    BkComplex { re, im }
}

#[test]
fn phi_for_roots_plus_minus_one() {
    let s = angles(&[(0, 1), (1, 2)], harmonic(1.0));
    unsafe {
        assert_eq!(bk_space_roots(s), 2);
        let mut beta = [BkComplex::default(); 3];
        assert_eq!(bk_phi_coeffs(s, beta.as_mut_ptr(), 3), BkStatus::Ok);
        assert!((beta[0].re - 1.0).abs() < 1e-15 && beta[1].re.abs() < 1e-15 && (beta[2].re + 1.0).abs() < 1e-15);
        assert_eq!(bk_phi_coeffs(s, beta.as_mut_ptr(), 2), BkStatus::BufferTooSmall);
        bk_space_free(s);
    }
}

#[test]
fn kernel_value_at_the_root() {
    let s = angles(&[(0, 1)], harmonic(1.0));
    let (mut v, mut tail) = (BkComplex::default(), 0.0);
    unsafe {
        assert_eq!(bk_kernel_eval(s, c(1.0, 0.0), c(1.0, 0.0), 1e-6, &mut v, &mut tail), BkStatus::Ok);
        assert!((v.re - (std::f64::consts::PI.powi(2) / 6.0 - 1.0)).abs() <= 1e-6);
        assert!(tail <= 1e-6);
        // outside the closed disk
        assert_eq!(bk_kernel_eval(s, c(1.5, 0.0), c(0.0, 0.0), 1e-6, &mut v, ptr::null_mut()), BkStatus::Domain);
        assert!(last_error().contains("1.5"));
        bk_space_free(s);
    }
}

#[test]
fn divergent_example_column() {
    let s = angles(
        &[(0, 1), (1, 2)],
        BkWeights {
            kind: BkWeightKind::PowerLaw,
            p: 2.0,
            offset: 0.0,
        },
    );
    let mut col = vec![BkComplex::default(); 3];
    unsafe {
        assert_eq!(bk_c_column(s, 0, 2, col.as_mut_ptr(), 3), BkStatus::Ok);
        assert!((col[0].re - 1.0).abs() < 1e-15);
        assert!((col[2].re + 7.0 / 16.0).abs() < 1e-12);
        bk_space_free(s);
    }
}

#[test]
fn constant_expansion_and_multiplier() {
    let s = angles(&[(0, 1)], harmonic(1.0));
    let mut e = vec![BkComplex::default(); 64];
    let mut m = vec![BkComplex::default(); 8];
    unsafe {
        assert_eq!(bk_constant_expansion(s, e.as_mut_ptr(), 64), BkStatus::Ok);
        for (j, v) in e.iter().enumerate() {
            assert!((v.re - 1.0 / (j as f64 + 1.0)).abs() < 1e-12);
        }
        assert_eq!(bk_mz_column(s, 3, 8, m.as_mut_ptr(), 8), BkStatus::Ok);
        assert!((m[0].re - 1.0).abs() < 1e-15);
        assert_eq!(bk_mz_column(s, 3, 1, m.as_mut_ptr(), 8), BkStatus::Config);
        bk_space_free(s);
    }
}

#[test]
fn reconstruct_then_decompose() {
    let s = angles(&[(0, 1), (1, 3)], harmonic(1.0));
    let g = [c(0.5, 0.1), c(-0.25, 0.0), c(0.0, 0.3)];
    let b = [c(0.2, -0.1), c(-0.4, 0.0)];
    let len = 512;
    let mut alpha = vec![BkComplex::default(); len];
    let mut g2 = vec![BkComplex::default(); len];
    let mut b2 = [BkComplex::default(); 2];
    let mut residual = f64::NAN;
    unsafe {
        assert_eq!(bk_reconstruct(s, g.as_ptr(), 3, b.as_ptr(), alpha.as_mut_ptr(), len), BkStatus::Ok);
        assert_eq!(
            bk_decompose(s, alpha.as_ptr(), len, g2.as_mut_ptr(), b2.as_mut_ptr(), &mut residual),
            BkStatus::Ok
        );
        bk_space_free(s);
    }
    for i in 0..len {
        let want = g.get(i).copied().unwrap_or_default();
        assert!((g2[i].re - want.re).abs() < 1e-6 && (g2[i].im - want.im).abs() < 1e-6, "g[{i}]");
    }
    for (x, y) in b2.iter().zip(&b) {
        assert!((x.re - y.re).abs() < 1e-6 && (x.im - y.im).abs() < 1e-6);
    }
    assert!(residual < 1e-9);
}

#[test]
fn containment_verdicts() {
    let s = angles(&[(0, 1), (1, 2)], harmonic(2.0));
    let sizes = [64usize, 128, 256];
    let mut norms = [0.0; 3];
    let mut verdict = BkVerdict::Inconclusive;
    unsafe {
        assert_eq!(bk_containment_norms(s, sizes.as_ptr(), 3, norms.as_mut_ptr(), &mut verdict), BkStatus::Ok);
        assert_eq!(verdict, BkVerdict::LikelyBounded);
        assert!(norms[0] <= norms[1] && norms[1] <= norms[2] * (1.0 + 1e-12));
        let bad = [128usize, 64];
        assert_eq!(bk_containment_norms(s, bad.as_ptr(), 2, norms.as_mut_ptr(), &mut verdict), BkStatus::Config);
        bk_space_free(s);
    }
}

#[test]
fn invalid_input_is_reported_not_panicked() {
    let mut s = ptr::null_mut();
    unsafe {
        // duplicate roots
        let nums = [1i64, 2];
        let dens = [2u64, 4];
        assert_eq!(bk_space_new_angles(nums.as_ptr(), dens.as_ptr(), 2, harmonic(1.0), &mut s), BkStatus::Config);
        assert!(s.is_null());
        assert!(!last_error().is_empty());
        // off the unit circle
        let pts = [c(0.5, 0.0)];
        assert_eq!(bk_space_new_points(pts.as_ptr(), 1, harmonic(1.0), &mut s), BkStatus::Config);
        assert_eq!(bk_space_new_points(ptr::null(), 1, harmonic(1.0), &mut s), BkStatus::NullPointer);
        assert_eq!(bk_space_new_points(pts.as_ptr(), 1, harmonic(1.0), ptr::null_mut()), BkStatus::NullPointer);
        assert_eq!(bk_phi_coeffs(ptr::null(), ptr::null_mut(), 0), BkStatus::NullPointer);
        assert_eq!(bk_space_roots(ptr::null()), 0);
        bk_space_free(ptr::null_mut());
    }
}

#[test]
fn error_message_truncates_and_reports_length() {
    let mut s = ptr::null_mut();
    unsafe {
        bk_space_new_points(ptr::null(), 1, harmonic(1.0), &mut s);
        let full = bk_last_error_message(ptr::null_mut(), 0);
        let mut buf = [0 as std::ffi::c_char; 4];
        assert_eq!(bk_last_error_message(buf.as_mut_ptr(), 4), full);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_bytes().len(), 3);
        assert!(!CStr::from_ptr(bk_version()).to_bytes().is_empty());
    }
}
