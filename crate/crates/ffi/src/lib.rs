//! C interface to `airy-core`.
//!
//! Families are opaque handles created with [`airy_family_new`] and released
//! with [`airy_family_free`]. Every fallible call returns an [`AiryStatus`];
//! on failure the message is available from [`airy_last_error`] on the same
//! thread. Structured results are JSON strings owned by the caller and
//! released with [`airy_string_free`].

use airy_core::config::RunConfig;
use airy_core::ff::{build_field, FieldElement};
use airy_core::fiber::{fiber_l_poly, AiryFamily as Family};
use airy_core::Error;
use serde_json::json;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AiryStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NotPrime = 3,
    Unsupported = 4,
    PrecondViolation = 5,
    TooLarge = 6,
    VerificationFailed = 7,
    Internal = 8,
    Panic = 9,
}

/// Opaque family `f(x) + t x` over `F_q`.
pub struct AiryFamily {
    inner: Family,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> AiryStatus {
    match err {
        Error::NotPrime(_) => AiryStatus::NotPrime,
        Error::InvalidInput(_) => AiryStatus::InvalidInput,
        Error::Unsupported(_) | Error::EvenCharacteristic => AiryStatus::Unsupported,
        Error::PrecondViolation(_) => AiryStatus::PrecondViolation,
        Error::TooLarge { .. } => AiryStatus::TooLarge,
        Error::DegreeMismatch { .. } | Error::NonDivisible | Error::FunctionalEquationFailure(_) => {
            AiryStatus::VerificationFailed
        }
        _ => AiryStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), AiryStatus>) -> AiryStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AiryStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside airy-core".into());
            AiryStatus::Panic
        }
    }
}

fn lift<T>(r: airy_core::Result<T>) -> Result<T, AiryStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null() -> AiryStatus {
    set_error("null pointer argument".into());
    AiryStatus::NullPointer
}

unsafe fn family<'a>(h: *const AiryFamily) -> Result<&'a Family, AiryStatus> {
    h.as_ref().map(|h| &h.inner).ok_or_else(null)
}

unsafe fn write_json(out: *mut *mut c_char, value: &serde_json::Value) -> Result<(), AiryStatus> {
    let text = lift(serde_json::to_string(value).map_err(Error::from))?;
    let c = CString::new(text).map_err(|_| AiryStatus::Internal)?;
    *out = c.into_raw();
    Ok(())
}

fn config(budget: u64) -> RunConfig {
    let mut cfg = RunConfig::default();
    if budget > 0 {
        cfg.max_enumeration = budget;
    }
    cfg
}

/// Builds a family from `len = d + 1` coefficients `c_0..c_d`.
///
/// With `a == 1` the values are residues mod `p`; otherwise they are element
/// indices of `F_{p^a}`.
///
/// # Safety
/// `coeffs` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn airy_family_new(
    p: u64,
    a: u32,
    coeffs: *const i64,
    len: usize,
    out: *mut *mut AiryFamily,
) -> AiryStatus {
    guard(|| {
        if coeffs.is_null() || out.is_null() {
            return Err(null());
        }
        let values = std::slice::from_raw_parts(coeffs, len);
        let inner = lift(Family::from_ints(p, a as usize, values))?;
        *out = Box::into_raw(Box::new(AiryFamily { inner }));
        Ok(())
    })
}

/// # Safety
/// `fam` must come from [`airy_family_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn airy_family_free(fam: *mut AiryFamily) {
    if !fam.is_null() {
        drop(Box::from_raw(fam));
    }
}

/// Predicted degree of `M_k`; negative when the L-function is `1/Q_k`.
///
/// # Safety
/// `fam` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn airy_predicted_degree(fam: *const AiryFamily, k: u32, out: *mut i64) -> AiryStatus {
    guard(|| {
        let fam = family(fam)?;
        if out.is_null() {
            return Err(null());
        }
        *out = lift(airy_core::swan::predicted_degree(fam, k as usize))?;
        Ok(())
    })
}

/// Swan conductor of `Sym^k` at infinity.
///
/// # Safety
/// `fam` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn airy_swan(fam: *const AiryFamily, k: u32, out: *mut u64) -> AiryStatus {
    guard(|| {
        let fam = family(fam)?;
        if out.is_null() {
            return Err(null());
        }
        *out = lift(airy_core::swan::swan_sym(fam, k as usize))?;
        Ok(())
    })
}

/// Local factor `Q_k` at infinity as JSON.
///
/// # Safety
/// `fam` must be a live handle and `out` writable. Free the result with
/// [`airy_string_free`].
#[no_mangle]
pub unsafe extern "C" fn airy_trivial_factor_json(fam: *const AiryFamily, k: u32, out: *mut *mut c_char) -> AiryStatus {
    guard(|| {
        let fam = family(fam)?;
        if out.is_null() {
            return Err(null());
        }
        let tf = lift(airy_core::swan::trivial_factor(fam, k as usize))?;
        write_json(
            out,
            &json!({"k": k, "lambda": tf.lambda, "exponent": tf.exponent, "Q": tf.poly.coeffs(), "orbit_counts": tf.counts}),
        )
    })
}

/// Fiber L-polynomial at the element of `F_{q^e}` with index `t`.
///
/// `budget == 0` keeps the default enumeration budget.
///
/// # Safety
/// `fam` must be a live handle and `out` writable. Free the result with
/// [`airy_string_free`].
#[no_mangle]
pub unsafe extern "C" fn airy_fiber_json(
    fam: *const AiryFamily,
    e: u32,
    t: u64,
    budget: u64,
    out: *mut *mut c_char,
) -> AiryStatus {
    guard(|| {
        let fam = family(fam)?;
        if out.is_null() {
            return Err(null());
        }
        let field = lift(build_field(fam.p() as u64, fam.a() * e as usize))?;
        if t as u128 >= field.size() {
            set_error(format!("t = {t} is not an element index of a field of {} elements", field.size()));
            return Err(AiryStatus::InvalidInput);
        }
        let tt = lift(FieldElement::from_index(&field, t as u128))?;
        let fiber = lift(fiber_l_poly(fam, e as usize, &tt, config(budget).max_enumeration))?;
        let dev = fiber.weight_deviation();
        write_json(out, &json!({"fiber": fiber, "weight_deviation": dev}))
    })
}

/// `M_k` with every verification, as a JSON report.
///
/// Returns [`AiryStatus::VerificationFailed`] when the report is produced but
/// some check fails; `out` is still set in that case.
///
/// # Safety
/// `fam` must be a live handle and `out` writable. Free the result with
/// [`airy_string_free`].
#[no_mangle]
pub unsafe extern "C" fn airy_lfunction_json(
    fam: *const AiryFamily,
    k: u32,
    budget: u64,
    out: *mut *mut c_char,
) -> AiryStatus {
    guard(|| {
        let fam = family(fam)?;
        if out.is_null() {
            return Err(null());
        }
        let report = lift(airy_core::global::lfunction(fam, k as usize, &config(budget), None))?;
        write_json(out, &lift(serde_json::to_value(&report).map_err(Error::from))?)?;
        if report.verified {
            Ok(())
        } else {
            set_error(format!("verification failed: flags {:?}", report.flags));
            Err(AiryStatus::VerificationFailed)
        }
    })
}

/// Newton-polygon monodromy scan over closed points of degree `<= max_e`.
///
/// # Safety
/// `fam` must be a live handle and `out` writable. Free the result with
/// [`airy_string_free`].
#[no_mangle]
pub unsafe extern "C" fn airy_scan_monodromy_json(
    fam: *const AiryFamily,
    max_e: u32,
    budget: u64,
    out: *mut *mut c_char,
) -> AiryStatus {
    guard(|| {
        let fam = family(fam)?;
        if out.is_null() {
            return Err(null());
        }
        let v = lift(airy_core::monodromy::scan_single_slope(
            fam,
            max_e as usize,
            config(budget).max_enumeration,
            None,
        ))?;
        write_json(out, &lift(serde_json::to_value(&v).map_err(Error::from))?)
    })
}

/// Message of the last failed call on this thread, or null.
///
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn airy_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn airy_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn airy_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(c) => c,
        Err(_) => c"",
    };
    V.as_ptr()
}
