//! C ABI over `qdilog`.
//!
//! Parameters live behind an opaque `QdParam` handle created by
//! `qd_param_from_b` or `qd_param_from_b2` and released with `qd_param_free`.
//! Every call returns a `QdStatus`; results go through out-pointers. After a
//! failure `qd_last_error` returns a message for the calling thread.

use qdilog::dilog::variants::{variant, VariantKind};
use qdilog::dilog::{gb, QDValue};
use qdilog::verify::{run_suite, Suite};
use qdilog::{Complex, Error, ModularParam};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status code returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExhausted = 3,
    Pole = 4,
    Zero = 5,
    NonFinite = 6,
    Domain = 7,
    Precondition = 8,
    ResidueMismatch = 9,
    Decay = 10,
    Branch = 11,
    Divergent = 12,
    /// Some verification checks failed.
    VerifyFailed = 13,
    Panic = 99,
}

impl From<&Error> for QdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::BudgetExhausted { .. } => QdStatus::BudgetExhausted,
            Error::Pole(_) => QdStatus::Pole,
            Error::Zero(_) => QdStatus::Zero,
            Error::NonFinite => QdStatus::NonFinite,
            Error::Domain(_) => QdStatus::Domain,
            Error::Precondition(_) => QdStatus::Precondition,
            Error::ResidueMismatch { .. } => QdStatus::ResidueMismatch,
            Error::Decay(_) => QdStatus::Decay,
            Error::Branch(_) => QdStatus::Branch,
            Error::Divergent(_) => QdStatus::Divergent,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QdComplex {
    pub re: f64,
    pub im: f64,
}

impl From<QdComplex> for Complex {
    fn from(c: QdComplex) -> Self {
        Complex::new(c.re, c.im)
    }
}

impl From<Complex> for QdComplex {
    fn from(c: Complex) -> Self {
        QdComplex { re: c.re, im: c.im }
    }
}

/// A value with its error estimate and the backend that produced it
/// (0 product, 1 integral, 2 functional continuation).
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QdValue {
    pub value: QdComplex,
    pub err_estimate: f64,
    pub backend: i32,
}

impl From<QDValue> for QdValue {
    fn from(v: QDValue) -> Self {
        let backend = match v.backend {
            qdilog::Backend::Product => 0,
            qdilog::Backend::Integral => 1,
            qdilog::Backend::FunctionalContinuation => 2,
        };
        QdValue { value: v.value.into(), err_estimate: v.err_estimate, backend }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdVariant {
    Sb = 0,
    GbSmall = 1,
    Veta = 2,
}

/// Opaque parameter handle.
pub struct QdParam(ModularParam);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure message and converts panics to `Panic`.
fn guard<F: FnOnce() -> Result<(), (QdStatus, String)>>(f: F) -> QdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QdStatus::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            QdStatus::Panic
        }
    }
}

fn num(e: Error) -> (QdStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (QdStatus, String) {
    (QdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn param_ref<'a>(p: *const QdParam) -> Result<&'a ModularParam, (QdStatus, String)> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("param"))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), (QdStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn new_param(out: *mut *mut QdParam, p: qdilog::Result<ModularParam>) -> QdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let p = p.map_err(num)?;
        out.write(Box::into_raw(Box::new(QdParam(p))));
        Ok(())
    })
}

/// Creates a parameter from real `b > 0`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_param_from_b(b: f64, out: *mut *mut QdParam) -> QdStatus {
    new_param(out, ModularParam::from_b(b))
}

/// Creates a parameter from complex `b^2`, which must have positive
/// imaginary part or be real and positive.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qd_param_from_b2(b2: QdComplex, out: *mut *mut QdParam) -> QdStatus {
    new_param(out, ModularParam::from_b2(b2.into()))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `p` must come from a constructor above and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qd_param_free(p: *mut QdParam) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Writes `b`, `Q` and `q` of the parameter.
///
/// # Safety
/// `p` must be a live handle; the out-pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn qd_param_values(p: *const QdParam, b: *mut QdComplex, big_q: *mut QdComplex, q: *mut QdComplex) -> QdStatus {
    guard(|| {
        let p = param_ref(p)?;
        for (ptr, v) in [(b, p.b), (big_q, p.big_q), (q, p.q)] {
            if !ptr.is_null() {
                ptr.write(v.into());
            }
        }
        Ok(())
    })
}

/// Euler gamma function.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qd_gamma(z: QdComplex, out: *mut QdComplex) -> QdStatus {
    guard(|| write(out, qdilog::gamma::gamma(z.into()).map_err(num)?.into()))
}

/// Quantum dilogarithm `G_b(x)`.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qd_gb(p: *const QdParam, x: QdComplex, tol: f64, out: *mut QdValue) -> QdStatus {
    guard(|| {
        let p = param_ref(p)?;
        write(out, gb(x.into(), p, tol).map_err(num)?.into())
    })
}

/// `S_b`, the small-`g_b` function or `V_eta`, each through `G_b`.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qd_variant(p: *const QdParam, kind: QdVariant, x: QdComplex, tol: f64, out: *mut QdValue) -> QdStatus {
    guard(|| {
        let p = param_ref(p)?;
        let k = match kind {
            QdVariant::Sb => VariantKind::Sb,
            QdVariant::GbSmall => VariantKind::GbSmall,
            QdVariant::Veta => VariantKind::Veta,
        };
        write(out, variant(k, x.into(), p, tol).map_err(num)?.into())
    })
}

/// Runs one verification suite by name (for example `"gb-identities"`) and
/// writes the pass and fail counts. Returns `VerifyFailed` if any check
/// failed.
///
/// # Safety
/// `suite` must be a nul-terminated string; the counters may be null.
#[no_mangle]
pub unsafe extern "C" fn qd_verify(suite: *const c_char, tol: f64, seed: u64, passed: *mut u32, failed: *mut u32) -> QdStatus {
    guard(|| {
        if suite.is_null() {
            return Err(null("suite"));
        }
        let name = CStr::from_ptr(suite).to_str().map_err(|_| (QdStatus::InvalidArgument, "suite is not utf-8".to_string()))?;
        let s = Suite::parse(name).ok_or_else(|| (QdStatus::InvalidArgument, format!("unknown suite '{name}'")))?;
        if !(tol > 0.0) {
            return Err((QdStatus::InvalidArgument, format!("tol must be positive, got {tol}")));
        }
        let checks = run_suite(s, tol, seed);
        let bad = checks.iter().filter(|c| !c.pass).count() as u32;
        let good = checks.len() as u32 - bad;
        if !passed.is_null() {
            passed.write(good);
        }
        if !failed.is_null() {
            failed.write(bad);
        }
        if bad > 0 {
            return Err((QdStatus::VerifyFailed, format!("{bad} check(s) failed in {name}")));
        }
        Ok(())
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
