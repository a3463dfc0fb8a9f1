use airy_ffi::*;
use std::ffi::{c_char, CStr};
use std::ptr;

fn new_family(p: u64, a: u32, c: &[i64]) -> (AiryStatus, *mut AiryFamily) {
    let mut h = ptr::null_mut();
    let s = unsafe { airy_family_new(p, a, c.as_ptr(), c.len(), &mut h) };
    (s, h)
}

fn take(s: *mut c_char) -> serde_json::Value {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { airy_string_free(s) };
    serde_json::from_str(&text).unwrap()
}

fn last_error() -> String {
    let p = airy_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn degree_and_swan_for_cubic() {
    let (s, h) = new_family(7, 1, &[0, 0, 0, 1]);
    assert_eq!(s, AiryStatus::Ok);
    let mut deg = 0i64;
    for (k, expect) in [(0u32, -1i64), (1, 1), (2, 0), (3, 2), (4, 1), (5, 3)] {
        assert_eq!(unsafe { airy_predicted_degree(h, k, &mut deg) }, AiryStatus::Ok);
        assert_eq!(deg, expect, "k = {k}");
    }
    let mut sw = 0u64;
    assert_eq!(unsafe { airy_swan(h, 1, &mut sw) }, AiryStatus::Ok);
    assert_eq!(sw, 3);
    unsafe { airy_family_free(h) };
}

#[test]
fn not_prime_sets_error() {
    let (s, h) = new_family(4, 1, &[0, 0, 0, 1]);
    assert_eq!(s, AiryStatus::NotPrime);
    assert!(h.is_null());
    assert!(last_error().contains("not prime"));
}

#[test]
fn null_arguments() {
    let mut deg = 0i64;
    assert_eq!(unsafe { airy_predicted_degree(ptr::null(), 1, &mut deg) }, AiryStatus::NullPointer);
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { airy_family_new(7, 1, ptr::null(), 4, &mut h) }, AiryStatus::NullPointer);
    unsafe { airy_family_free(ptr::null_mut()) };
    unsafe { airy_string_free(ptr::null_mut()) };
}

#[test]
fn precondition_violation_for_small_p() {
    let (s, h) = new_family(5, 1, &[0, 0, 0, 0, 0, 0, 0, 1]);
    assert_eq!(s, AiryStatus::Ok);
    let mut deg = 0i64;
    assert_eq!(unsafe { airy_predicted_degree(h, 1, &mut deg) }, AiryStatus::PrecondViolation);
    unsafe { airy_family_free(h) };
}

#[test]
fn lfunction_json_round_trip() {
    let (_, h) = new_family(7, 1, &[0, 0, 0, 1]);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { airy_lfunction_json(h, 1, 0, &mut out) }, AiryStatus::Ok);
    let v = take(out);
    assert_eq!(v["k"], 1);
    assert_eq!(v["verified"], true);
    assert_eq!(v["observed_degree"], 1);
    unsafe { airy_family_free(h) };
}

#[test]
fn trivial_factor_json() {
    let (_, h) = new_family(7, 1, &[0, 0, 0, 1]);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { airy_trivial_factor_json(h, 4, &mut out) }, AiryStatus::Ok);
    let v = take(out);
    assert_eq!(v["Q"].as_array().unwrap().len(), 2);
    unsafe { airy_family_free(h) };
}

#[test]
fn fiber_json_and_bad_index() {
    let (_, h) = new_family(7, 1, &[0, 0, 0, 1]);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { airy_fiber_json(h, 1, 3, 0, &mut out) }, AiryStatus::Ok);
    let v = take(out);
    assert!(v["weight_deviation"].as_f64().unwrap() < 1e-6);
    assert_eq!(unsafe { airy_fiber_json(h, 1, 7, 0, &mut out) }, AiryStatus::InvalidInput);
    assert!(last_error().contains("element index"));
    unsafe { airy_family_free(h) };
}

#[test]
fn budget_is_enforced() {
    let (_, h) = new_family(7, 1, &[0, 0, 0, 1]);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { airy_scan_monodromy_json(h, 3, 10, &mut out) }, AiryStatus::TooLarge);
    assert_eq!(unsafe { airy_scan_monodromy_json(h, 1, 0, &mut out) }, AiryStatus::Ok);
    assert_eq!(take(out)["status"], "infinite_certain");
    unsafe { airy_family_free(h) };
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/airy_ffi.h")).unwrap();
    for name in [
        "airy_family_new",
        "airy_family_free",
        "airy_predicted_degree",
        "airy_swan",
        "airy_trivial_factor_json",
        "airy_fiber_json",
        "airy_lfunction_json",
        "airy_scan_monodromy_json",
        "airy_last_error",
        "airy_string_free",
        "airy_version",
        "AIRY_STATUS_NOT_PRIME",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    assert!(!unsafe { CStr::from_ptr(airy_version()) }.to_bytes().is_empty());
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile_dir();
    let src = dir.join("check.c");
    std::fs::write(&src, "#include \"airy_ffi.h\"\nint main(void) { return airy_version() == 0; }\n").unwrap();
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(e) => eprintln!("no C compiler available ({e}); header syntax not checked"),
    }
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("airy-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
