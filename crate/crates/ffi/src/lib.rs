//! C interface: opaque case and report handles, status codes, and JSON or
//! plain-text results. Strings returned through `char **` are owned by the
//! caller and released with [`fresco_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fresco_core::case::{run_case, CaseFile, CaseReport, RunOptions};
use fresco_core::cli::{cmd_bpoly, cmd_xi};
use fresco_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrescoStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed expression, case file or parameter value.
    Validation = 3,
    /// The computation failed on valid input.
    Pipeline = 4,
    Panic = 5,
}

/// A parsed case file.
pub struct FrescoCase {
    case: CaseFile,
}

/// The result of analyzing a case; may be partial.
pub struct FrescoReport {
    report: CaseReport,
    json: CString,
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FrescoStatus {
    set_error(&e.to_string());
    if e.is_validation() {
        FrescoStatus::Validation
    } else {
        FrescoStatus::Pipeline
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, FrescoStatus> {
    if p.is_null() {
        set_error("null argument");
        return Err(FrescoStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        FrescoStatus::InvalidUtf8
    })
}

fn guarded(f: impl FnOnce() -> FrescoStatus) -> FrescoStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        FrescoStatus::Panic
    })
}

fn to_c(s: String) -> CString {
    CString::new(s.replace('\0', " ")).unwrap_or_default()
}

/// Message of the last failure on this thread. Valid until the next call
/// on the same thread; never null.
#[no_mangle]
pub extern "C" fn fresco_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn fresco_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a case file given as JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fresco_case_from_json(json: *const c_char, out: *mut *mut FrescoCase) -> FrescoStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return FrescoStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match CaseFile::from_json(text) {
            Ok(case) => {
                *out = Box::into_raw(Box::new(FrescoCase { case }));
                FrescoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `case` must come from [`fresco_case_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn fresco_case_free(case: *mut FrescoCase) {
    if !case.is_null() {
        drop(Box::from_raw(case));
    }
}

/// Runs the pipeline. `truncation` 0 keeps the case value; `lambda` may be
/// null. On a pipeline failure the status is `Pipeline` and `*out` still
/// holds the partial report.
///
/// # Safety
/// `case` must be a live handle, `lambda` null or NUL-terminated, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fresco_case_analyze(
    case: *const FrescoCase,
    truncation: u32,
    lambda: *const c_char,
    out: *mut *mut FrescoReport,
) -> FrescoStatus {
    guarded(|| {
        if case.is_null() || out.is_null() {
            set_error("null argument");
            return FrescoStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let lambda = if lambda.is_null() {
            None
        } else {
            match read_str(lambda) {
                Ok(l) => Some(l.to_string()),
                Err(s) => return s,
            }
        };
        let options = RunOptions { truncation: (truncation > 0).then_some(truncation as usize), lambda };
        match run_case(&(*case).case, &options) {
            Ok(outcome) => {
                let report = outcome.report;
                let status = match &report.error {
                    Some(e) => {
                        set_error(&format!("{}: {}", e.stage, e.message));
                        FrescoStatus::Pipeline
                    }
                    None => FrescoStatus::Ok,
                };
                let json = to_c(report.to_json());
                let text = to_c(report.to_text());
                *out = Box::into_raw(Box::new(FrescoReport { report, json, text }));
                status
            }
            Err(e) => status_of(&e),
        }
    })
}

/// The report as JSON with sorted keys. Borrowed from the handle.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fresco_report_json(report: *const FrescoReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).json.as_ptr()
}

/// The report in text form. Borrowed from the handle.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fresco_report_text(report: *const FrescoReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).text.as_ptr()
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fresco_report_is_complete(report: *const FrescoReport) -> bool {
    !report.is_null() && (*report).report.is_complete()
}

/// # Safety
/// `report` must come from [`fresco_case_analyze`] or be null.
#[no_mangle]
pub unsafe extern "C" fn fresco_report_free(report: *mut FrescoReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Bernstein polynomial of a homogeneous operator, e.g. `"(a-3b)(a-2b)(a-b)"`.
///
/// # Safety
/// `expr` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fresco_bpoly(expr: *const c_char, out: *mut *mut c_char) -> FrescoStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return FrescoStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let expr = match read_str(expr) {
            Ok(e) => e,
            Err(s) => return s,
        };
        match cmd_bpoly(expr) {
            Ok(b) => {
                *out = to_c(b.rendered).into_raw();
                FrescoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Applies an operator to a target such as `"s^1*Log^2"` in `Theta`.
///
/// # Safety
/// `expr` and `target` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fresco_xi(expr: *const c_char, target: *const c_char, truncation: u32, out: *mut *mut c_char) -> FrescoStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return FrescoStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let (expr, target) = match (read_str(expr), read_str(target)) {
            (Ok(e), Ok(t)) => (e, t),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        if truncation == 0 {
            set_error("truncation must be positive");
            return FrescoStatus::Validation;
        }
        match cmd_xi(expr, target, truncation as usize) {
            Ok(s) => {
                *out = to_c(s).into_raw();
                FrescoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn fresco_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
