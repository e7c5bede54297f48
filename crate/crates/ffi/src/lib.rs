//! C interface to `qcat`.
//!
//! Documents and reports are opaque handles owned by the caller and released
//! with their `_free` function. Strings returned by the library are released
//! with [`qcat_string_free`]. On failure a message is available from
//! [`qcat_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qcat::app::{self, Command, Input, Options};
use qcat::json::{self, AnyDoc, NoResolver, ParseContext};
use qcat::report::Report;

/// Result codes. `Ok` and `Negative` mirror the command-line exit codes 0 and
/// 1; the others are failures with a message in [`qcat_last_error`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcatStatus {
    Ok = 0,
    Negative = 1,
    InputError = 2,
    NullPointer = 3,
    Utf8 = 4,
    Panic = 5,
}

/// A parsed document.
pub struct QcatDocument {
    doc: AnyDoc,
}

/// The report of a command.
pub struct QcatReport {
    report: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(QcatStatus, String);

impl From<qcat::Error> for Fail {
    fn from(e: qcat::Error) -> Fail {
        Fail(QcatStatus::InputError, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<QcatStatus, Fail>) -> QcatStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QcatStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(QcatStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: the caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Fail(QcatStatus::Utf8, format!("{what} is not valid UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("interior NULs removed")
        .into_raw()
}

fn parse_json(text: &str, what: &str) -> Result<serde_json::Value, Fail> {
    serde_json::from_str(text).map_err(|e| Fail(QcatStatus::InputError, format!("{what}: {e}")))
}

/// Parses a JSON document. Path references inside it are rejected.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qcat_document_parse(
    json: *const c_char,
    allow_float: bool,
    out: *mut *mut QcatDocument,
) -> QcatStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(QcatStatus::NullPointer, "out is null".into()));
        }
        let text = unsafe { read_str(json, "json") }?;
        let value = parse_json(text, "document")?;
        let doc = json::parse_any(&value, &ParseContext::new(allow_float, &NoResolver))?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(QcatDocument { doc })) };
        Ok(QcatStatus::Ok)
    })
}

/// Canonical JSON of a document, or null on a null handle.
///
/// # Safety
/// `doc` must be null or a live handle from [`qcat_document_parse`].
#[no_mangle]
pub unsafe extern "C" fn qcat_document_to_json(doc: *const QcatDocument) -> *mut c_char {
    // SAFETY: the caller guarantees the handle is live.
    match unsafe { doc.as_ref() } {
        Some(d) => into_c_string(json::to_pretty(&d.doc.to_json())),
        None => ptr::null_mut(),
    }
}

/// Quantale tag of a document (`bool2`, `cost`, `unit` or `delta`). The
/// string is static and must not be freed.
///
/// # Safety
/// `doc` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcat_document_quantale(doc: *const QcatDocument) -> *const c_char {
    // SAFETY: the caller guarantees the handle is live.
    let Some(d) = (unsafe { doc.as_ref() }) else {
        return ptr::null();
    };
    let tag: &'static CStr = match d.doc.quantale() {
        qcat::QuantaleId::Bool2 => c"bool2",
        qcat::QuantaleId::Cost => c"cost",
        qcat::QuantaleId::Unit => c"unit",
        qcat::QuantaleId::Delta => c"delta",
    };
    tag.as_ptr()
}

/// # Safety
/// `doc` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcat_document_free(doc: *mut QcatDocument) {
    if !doc.is_null() {
        // SAFETY: produced by Box::into_raw in qcat_document_parse.
        drop(unsafe { Box::from_raw(doc) });
    }
}

fn run(command: &str, inputs: Vec<Input>, params: &str, opts: &Options, out: *mut *mut QcatReport) -> Result<QcatStatus, Fail> {
    let params = if params.trim().is_empty() {
        serde_json::json!({})
    } else {
        parse_json(params, "params")?
    };
    let cmd = Command::from_name(command, &params)?;
    let report = app::execute(&cmd, &inputs, opts)?;
    let status = if report.exit_code() == 0 {
        QcatStatus::Ok
    } else {
        QcatStatus::Negative
    };
    // SAFETY: the callers check `out` before calling.
    unsafe { *out = Box::into_raw(Box::new(QcatReport { report })) };
    Ok(status)
}

fn read_options(params: &serde_json::Value) -> Options {
    let flag = |k: &str| params.get(k).and_then(serde_json::Value::as_bool).unwrap_or(false);
    Options {
        allow_float: flag("allow_float"),
        inexact: flag("inexact"),
    }
}

/// Runs a command on parsed documents. `params` is a JSON object (or null)
/// with the command's parameters: `object`, `morphism`, `to`, `depth`,
/// `family`, `quantale`, and the flags `allow_float`, `inexact`.
///
/// Returns `Ok` or `Negative` with a report in `*out`, or a failure code.
///
/// # Safety
/// `command` must be a NUL-terminated string, `docs` must point to `len` live
/// handles (or be null when `len` is 0), `params` must be null or a
/// NUL-terminated string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qcat_run(
    command: *const c_char,
    docs: *const *const QcatDocument,
    len: usize,
    params: *const c_char,
    out: *mut *mut QcatReport,
) -> QcatStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(QcatStatus::NullPointer, "out is null".into()));
        }
        let command = unsafe { read_str(command, "command") }?;
        let params = if params.is_null() { "" } else { unsafe { read_str(params, "params") }? };
        let handles: &[*const QcatDocument] = if len == 0 {
            &[]
        } else if docs.is_null() {
            return Err(Fail(QcatStatus::NullPointer, "docs is null".into()));
        } else {
            // SAFETY: the caller passes `len` handles.
            unsafe { std::slice::from_raw_parts(docs, len) }
        };
        let mut inputs = Vec::with_capacity(len);
        for (i, &h) in handles.iter().enumerate() {
            // SAFETY: each handle is live per the contract.
            let d = unsafe { h.as_ref() }
                .ok_or_else(|| Fail(QcatStatus::NullPointer, format!("docs[{i}] is null")))?;
            inputs.push(Input::inline(format!("doc{i}"), d.doc.to_json()));
        }
        let opts = read_options(&if params.trim().is_empty() {
            serde_json::json!({})
        } else {
            parse_json(params, "params")?
        });
        run(command, inputs, params, &opts, out)
    })
}

/// Like [`qcat_run`] with the documents given as a JSON array string.
///
/// # Safety
/// `command` and `docs_json` must be NUL-terminated strings, `params` null
/// or NUL-terminated, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qcat_run_json(
    command: *const c_char,
    docs_json: *const c_char,
    params: *const c_char,
    out: *mut *mut QcatReport,
) -> QcatStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(QcatStatus::NullPointer, "out is null".into()));
        }
        let command = unsafe { read_str(command, "command") }?;
        let docs = unsafe { read_str(docs_json, "docs_json") }?;
        let params = if params.is_null() { "" } else { unsafe { read_str(params, "params") }? };
        let serde_json::Value::Array(items) = parse_json(docs, "docs_json")? else {
            return Err(Fail(QcatStatus::InputError, "docs_json must be a JSON array".into()));
        };
        let inputs = items
            .into_iter()
            .enumerate()
            .map(|(i, j)| Input::inline(format!("doc{i}"), j))
            .collect();
        let opts = read_options(&if params.trim().is_empty() {
            serde_json::json!({})
        } else {
            parse_json(params, "params")?
        });
        run(command, inputs, params, &opts, out)
    })
}

/// 0 for a positive report, 1 for a negative one, -1 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcat_report_exit_code(report: *const QcatReport) -> i32 {
    // SAFETY: the caller guarantees the handle is live.
    unsafe { report.as_ref() }.map_or(-1, |r| r.report.exit_code())
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcat_report_to_json(report: *const QcatReport) -> *mut c_char {
    // SAFETY: the caller guarantees the handle is live.
    unsafe { report.as_ref() }.map_or(ptr::null_mut(), |r| into_c_string(r.report.to_json_string()))
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcat_report_to_text(report: *const QcatReport) -> *mut c_char {
    // SAFETY: the caller guarantees the handle is live.
    unsafe { report.as_ref() }.map_or(ptr::null_mut(), |r| into_c_string(r.report.to_text()))
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcat_report_free(report: *mut QcatReport) {
    if !report.is_null() {
        // SAFETY: produced by Box::into_raw in run.
        drop(unsafe { Box::from_raw(report) });
    }
}

/// Message of the last failure on this thread, or null. Valid until the next
/// call into the library on the same thread; do not free.
#[no_mangle]
pub extern "C" fn qcat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcat_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in into_c_string.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Library version; static, do not free.
#[no_mangle]
pub extern "C" fn qcat_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}
