use qdilog_ffi::*;
use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

fn param(b: f64) -> *mut QdParam {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { qd_param_from_b(b, &mut p) }, QdStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let m = qd_last_error();
    assert!(!m.is_null());
    unsafe { CStr::from_ptr(m) }.to_string_lossy().into_owned()
}

#[test]
fn gamma_values_and_pole() {
    let mut out = QdComplex::default();
    assert_eq!(unsafe { qd_gamma(QdComplex { re: 5.0, im: 0.0 }, &mut out) }, QdStatus::Ok);
    assert!((out.re - 24.0).abs() < 1e-12 && out.im.abs() < 1e-12);
    assert_eq!(unsafe { qd_gamma(QdComplex { re: -2.0, im: 0.0 }, &mut out) }, QdStatus::Pole);
    assert!(last_error().contains("pole"));
}

#[test]
fn gb_matches_library() {
    let p = param(0.8);
    let x = QdComplex { re: 0.3, im: 0.2 };
    let mut v = QdValue::default();
    assert_eq!(unsafe { qd_gb(p, x, 1e-12, &mut v) }, QdStatus::Ok);
    let mp = qdilog::ModularParam::from_b(0.8).unwrap();
    let want = qdilog::dilog::gb(qdilog::Complex::new(0.3, 0.2), &mp, 1e-12).unwrap();
    assert_eq!((v.value.re, v.value.im), (want.value.re, want.value.im));
    assert_eq!(v.backend, 1);

    let mut b = QdComplex::default();
    let mut q = QdComplex::default();
    assert_eq!(unsafe { qd_param_values(p, &mut b, ptr::null_mut(), &mut q) }, QdStatus::Ok);
    assert_eq!(b.re, 0.8);
    assert!(((q.re * q.re + q.im * q.im) - 1.0).abs() < 1e-14);
    unsafe { qd_param_free(p) };
}

#[test]
fn product_regime_and_variants() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { qd_param_from_b2(QdComplex { re: 0.3, im: 0.4 }, &mut p) }, QdStatus::Ok);
    let mut v = QdValue::default();
    assert_eq!(unsafe { qd_gb(p, QdComplex { re: 0.5, im: 0.1 }, 1e-12, &mut v) }, QdStatus::Ok);
    assert_eq!(v.backend, 0);
    for kind in [QdVariant::Sb, QdVariant::GbSmall, QdVariant::Veta] {
        assert_eq!(unsafe { qd_variant(p, kind, QdComplex { re: 0.2, im: 0.1 }, 1e-10, &mut v) }, QdStatus::Ok);
        assert!(v.value.re.is_finite() && v.value.im.is_finite());
    }
    unsafe { qd_param_free(p) };
}

#[test]
fn invalid_inputs() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { qd_param_from_b(-1.0, &mut p) }, QdStatus::Domain);
    assert!(p.is_null());
    assert_eq!(unsafe { qd_param_from_b2(QdComplex { re: 0.3, im: -0.4 }, &mut p) }, QdStatus::Domain);
    assert_eq!(unsafe { qd_param_from_b(0.8, ptr::null_mut()) }, QdStatus::NullPointer);
    let mut v = QdValue::default();
    assert_eq!(unsafe { qd_gb(ptr::null(), QdComplex::default(), 1e-10, &mut v) }, QdStatus::NullPointer);
    let p = param(0.8);
    assert_eq!(unsafe { qd_gb(p, QdComplex { re: 0.3, im: 0.0 }, 1e-10, ptr::null_mut()) }, QdStatus::NullPointer);
    unsafe { qd_param_free(p) };
    unsafe { qd_param_free(ptr::null_mut()) };
}

#[test]
fn verify_suite_counts() {
    let name = CString::new("gb-identities").unwrap();
    let (mut good, mut bad) = (0u32, 0u32);
    assert_eq!(unsafe { qd_verify(name.as_ptr(), 1e-8, 1, &mut good, &mut bad) }, QdStatus::Ok);
    assert!(good > 0);
    assert_eq!(bad, 0);
    assert_eq!(unsafe { qd_verify(name.as_ptr(), 1e-30, 1, &mut good, &mut bad) }, QdStatus::VerifyFailed);
    assert!(bad > 0);
    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { qd_verify(unknown.as_ptr(), 1e-8, 1, ptr::null_mut(), ptr::null_mut()) }, QdStatus::InvalidArgument);
    assert!(last_error().contains("nope"));
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/qdilog.h");
    let text = std::fs::read_to_string(&header).expect("generated header");
    for f in ["qd_param_from_b", "qd_param_from_b2", "qd_param_free", "qd_gamma", "qd_gb", "qd_variant", "qd_verify", "qd_last_error"] {
        assert!(text.contains(&format!("{f}(")), "{f} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(dir.join("tests/smoke.c"))
        .status()
    else {
        eprintln!("no C compiler found; skipping the C syntax check");
        return;
    };
    assert!(status.success());
}
