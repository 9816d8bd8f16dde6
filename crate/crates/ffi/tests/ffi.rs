use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use fresco_ffi::*;

const OMEGA1: &str = include_str!("../../../cases/omega1.json");
const OMEGA2: &str = include_str!("../../../cases/omega2.json");

fn owned(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { fresco_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(fresco_last_error()) }.to_string_lossy().into_owned()
}

fn parse(json: &str) -> *mut FrescoCase {
    let text = CString::new(json).unwrap();
    let mut case = ptr::null_mut();
    assert_eq!(unsafe { fresco_case_from_json(text.as_ptr(), &mut case) }, FrescoStatus::Ok);
    case
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(fresco_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn bpoly_round_trip() {
    let expr = CString::new("(a-3b)(a-2b)(a-b)").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fresco_bpoly(expr.as_ptr(), &mut out) }, FrescoStatus::Ok);
    assert_eq!(owned(out), "(x+1)^3");
}

#[test]
fn bpoly_validation_error() {
    let expr = CString::new("a-").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fresco_bpoly(expr.as_ptr(), &mut out) }, FrescoStatus::Validation);
    assert!(out.is_null());
    assert!(last_error().contains("offset 2"), "{}", last_error());
}

#[test]
fn xi_applies_operator() {
    let expr = CString::new("b").unwrap();
    let target = CString::new("Log^1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fresco_xi(expr.as_ptr(), target.as_ptr(), 12, &mut out) }, FrescoStatus::Ok);
    assert_eq!(owned(out), "s*Log^1");
    assert_eq!(unsafe { fresco_xi(expr.as_ptr(), target.as_ptr(), 0, &mut out) }, FrescoStatus::Validation);
}

#[test]
fn null_arguments() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fresco_bpoly(ptr::null(), &mut out) }, FrescoStatus::NullArgument);
    let expr = CString::new("a").unwrap();
    assert_eq!(unsafe { fresco_bpoly(expr.as_ptr(), ptr::null_mut()) }, FrescoStatus::NullArgument);
    let mut case = ptr::null_mut();
    assert_eq!(unsafe { fresco_case_from_json(ptr::null(), &mut case) }, FrescoStatus::NullArgument);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { fresco_case_analyze(ptr::null(), 0, ptr::null(), &mut report) }, FrescoStatus::NullArgument);
    assert!(unsafe { fresco_report_json(ptr::null()) }.is_null());
    assert!(!unsafe { fresco_report_is_complete(ptr::null()) });
    unsafe {
        fresco_case_free(ptr::null_mut());
        fresco_report_free(ptr::null_mut());
        fresco_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8() {
    let bytes = [0x61u8, 0xff, 0];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fresco_bpoly(bytes.as_ptr().cast(), &mut out) }, FrescoStatus::InvalidUtf8);
}

#[test]
fn bad_case_json() {
    let text = CString::new("{\"name\": 1}").unwrap();
    let mut case = ptr::null_mut();
    assert_eq!(unsafe { fresco_case_from_json(text.as_ptr(), &mut case) }, FrescoStatus::Validation);
    assert!(case.is_null());
}

#[test]
fn analyze_omega1() {
    let case = parse(OMEGA1);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { fresco_case_analyze(case, 0, ptr::null(), &mut report) }, FrescoStatus::Ok);
    assert!(unsafe { fresco_report_is_complete(report) });
    let json = unsafe { CStr::from_ptr(fresco_report_json(report)) }.to_str().unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["bounds"]["bound"]["factored"], "(x+1)^3");
    assert_eq!(v["certificate"]["root"], "-1");
    let text = unsafe { CStr::from_ptr(fresco_report_text(report)) }.to_str().unwrap();
    assert!(!text.is_empty());
    unsafe {
        fresco_report_free(report);
        fresco_case_free(case);
    }
}

#[test]
fn analyze_with_lambda() {
    let case = parse(OMEGA1);
    let mut report = ptr::null_mut();
    let zero = CString::new("0").unwrap();
    assert_eq!(unsafe { fresco_case_analyze(case, 0, zero.as_ptr(), &mut report) }, FrescoStatus::Validation);
    assert!(report.is_null());
    let one = CString::new("1").unwrap();
    assert_eq!(unsafe { fresco_case_analyze(case, 0, one.as_ptr(), &mut report) }, FrescoStatus::Ok);
    let json = unsafe { CStr::from_ptr(fresco_report_json(report)) }.to_str().unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["generator"]["v"], "-24");
    unsafe {
        fresco_report_free(report);
        fresco_case_free(case);
    }
}

#[test]
fn pipeline_failure_keeps_partial_report() {
    let case = parse(&OMEGA2.replace("\"4a-8b\"", "\"4a-7b\""));
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { fresco_case_analyze(case, 0, ptr::null(), &mut report) }, FrescoStatus::Pipeline);
    assert!(!report.is_null());
    assert!(!unsafe { fresco_report_is_complete(report) });
    assert!(last_error().starts_with("theme"), "{}", last_error());
    unsafe {
        fresco_report_free(report);
        fresco_case_free(case);
    }
}

#[test]
fn header_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/fresco.h");
    assert!(std::path::Path::new(header).exists());
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(cc).args(["-fsyntax-only", "-x", lang, header]).output() else { continue };
        assert!(out.status.success(), "{cc}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
