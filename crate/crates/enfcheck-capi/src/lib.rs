//! C ABI for embedding the analyzer.
//!
//! The shape of the interface is deliberately small: parse a model
//! document into an opaque handle, run operations against it, and get
//! results back as heap-allocated C strings. Every fallible call
//! returns an `EnfStatus` code; on failure a human-readable message is
//! available from [`enf_last_error`] until the next call on the same
//! thread.
//!
//! Ownership rules:
//! - handles from `enf_document_parse` are released with
//!   `enf_document_free`
//! - strings written to an out-parameter are released with
//!   `enf_string_free`
//! - the pointer from `enf_last_error` is borrowed; do not free it
//!
//! The matching declarations live in `include/enfcheck.h`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use enfcheck::compose::{build_network, explore};
use enfcheck::dsl::{self, parse_document, ModelDocument};
use enfcheck::edit2io::{transform, CompletionPolicy};
use enfcheck::mcheck::verify;

/// Status codes returned by every fallible entry point.
pub const ENF_OK: c_int = 0;
pub const ENF_ERR_NULL_ARGUMENT: c_int = 1;
pub const ENF_ERR_UTF8: c_int = 2;
pub const ENF_ERR_PARSE: c_int = 3;
pub const ENF_ERR_UNKNOWN_NAME: c_int = 4;
pub const ENF_ERR_ANALYSIS: c_int = 5;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap());
}

fn fail(code: c_int, msg: impl Into<String>) -> c_int {
    set_error(msg);
    code
}

/// Opaque wrapper around a parsed model document.
pub struct EnfDocument {
    doc: ModelDocument,
}

unsafe fn borrow_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, c_int> {
    if p.is_null() {
        return Err(fail(ENF_ERR_NULL_ARGUMENT, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ENF_ERR_UTF8, format!("{what} is not valid UTF-8")))
}

fn give_string(out: *mut *mut c_char, s: String) -> c_int {
    let c = CString::new(s.replace('\0', " ")).unwrap();
    unsafe { *out = c.into_raw() };
    ENF_OK
}

/// Parses a model document. On success writes a handle to `out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn enf_document_parse(
    text: *const c_char,
    out: *mut *mut EnfDocument,
) -> c_int {
    if out.is_null() {
        return fail(ENF_ERR_NULL_ARGUMENT, "out is NULL");
    }
    *out = ptr::null_mut();
    let text = match borrow_str(text, "text") {
        Ok(t) => t,
        Err(code) => return code,
    };
    match parse_document(text) {
        Ok(doc) => {
            *out = Box::into_raw(Box::new(EnfDocument { doc }));
            ENF_OK
        }
        Err(e) => fail(ENF_ERR_PARSE, e.to_string()),
    }
}

/// Releases a handle from [`enf_document_parse`]. NULL is a no-op.
///
/// # Safety
/// `doc` must be a live handle or NULL; it is dead afterwards.
#[no_mangle]
pub unsafe extern "C" fn enf_document_free(doc: *mut EnfDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Verifies the named network against every policy in the document and
/// writes the JSON report to `json_out`.
///
/// `interference_out` may be NULL; otherwise it receives 1 when the
/// report finds interference and 0 when it does not.
///
/// # Safety
/// `doc` must be a live handle; `network` a NUL-terminated string;
/// `json_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn enf_verify(
    doc: *const EnfDocument,
    network: *const c_char,
    max_states: usize,
    interference_out: *mut c_int,
    json_out: *mut *mut c_char,
) -> c_int {
    if doc.is_null() || json_out.is_null() {
        return fail(ENF_ERR_NULL_ARGUMENT, "doc or json_out is NULL");
    }
    *json_out = ptr::null_mut();
    let name = match borrow_str(network, "network") {
        Ok(n) => n,
        Err(code) => return code,
    };
    let doc = &(*doc).doc;
    let decl = match doc.network(name) {
        Some(d) => d.clone(),
        None => return fail(ENF_ERR_UNKNOWN_NAME, format!("no network named `{name}`")),
    };
    let net = match build_network(
        &doc.enforcers_for(&decl),
        &doc.frameworks_for(&decl),
        &decl.targets,
        decl.completion,
    ) {
        Ok(n) => n,
        Err(e) => return fail(ENF_ERR_ANALYSIS, e.to_string()),
    };
    let policies = match doc.bind_policies(&decl) {
        Ok(p) => p,
        Err(e) => return fail(ENF_ERR_ANALYSIS, e.to_string()),
    };
    let report = match verify(&net, &policies, max_states) {
        Ok(r) => r,
        Err(e) => return fail(ENF_ERR_ANALYSIS, e.to_string()),
    };
    if !interference_out.is_null() {
        *interference_out = report.interference as c_int;
    }
    give_string(json_out, dsl::emit_report_json(&report))
}

/// Transforms the named edit automaton into its I/O form and writes the
/// Graphviz rendering to `dot_out`. `strict` selects the completion:
/// nonzero refuses undefined inputs, zero passes them through.
///
/// # Safety
/// `doc` must be a live handle; `name` a NUL-terminated string;
/// `dot_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn enf_transform_dot(
    doc: *const EnfDocument,
    name: *const c_char,
    strict: c_int,
    dot_out: *mut *mut c_char,
) -> c_int {
    if doc.is_null() || dot_out.is_null() {
        return fail(ENF_ERR_NULL_ARGUMENT, "doc or dot_out is NULL");
    }
    *dot_out = ptr::null_mut();
    let name = match borrow_str(name, "name") {
        Ok(n) => n,
        Err(code) => return code,
    };
    let doc = &(*doc).doc;
    let ea = match doc.edit_automaton(name) {
        Some(ea) => ea,
        None => {
            return fail(
                ENF_ERR_UNKNOWN_NAME,
                format!("no edit_automaton named `{name}`"),
            )
        }
    };
    let completion = if strict != 0 {
        CompletionPolicy::Strict
    } else {
        CompletionPolicy::Identity
    };
    let transformed = transform(ea, completion);
    give_string(dot_out, dsl::export_dot_io(&transformed.automaton))
}

/// Writes the Graphviz rendering of the named network's reachable
/// global state graph to `dot_out`.
///
/// # Safety
/// Same contract as [`enf_transform_dot`].
#[no_mangle]
pub unsafe extern "C" fn enf_network_dot(
    doc: *const EnfDocument,
    network: *const c_char,
    max_states: usize,
    dot_out: *mut *mut c_char,
) -> c_int {
    if doc.is_null() || dot_out.is_null() {
        return fail(ENF_ERR_NULL_ARGUMENT, "doc or dot_out is NULL");
    }
    *dot_out = ptr::null_mut();
    let name = match borrow_str(network, "network") {
        Ok(n) => n,
        Err(code) => return code,
    };
    let doc = &(*doc).doc;
    let decl = match doc.network(name) {
        Some(d) => d.clone(),
        None => return fail(ENF_ERR_UNKNOWN_NAME, format!("no network named `{name}`")),
    };
    let net = match build_network(
        &doc.enforcers_for(&decl),
        &doc.frameworks_for(&decl),
        &decl.targets,
        decl.completion,
    ) {
        Ok(n) => n,
        Err(e) => return fail(ENF_ERR_ANALYSIS, e.to_string()),
    };
    let graph = match explore(&net, max_states) {
        Ok(g) => g,
        Err(e) => return fail(ENF_ERR_ANALYSIS, e.to_string()),
    };
    give_string(dot_out, dsl::export_dot_global(&graph, &net))
}

/// Releases a string produced by this library. NULL is a no-op.
///
/// # Safety
/// `s` must come from an out-parameter of this library, at most once.
#[no_mangle]
pub unsafe extern "C" fn enf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on the calling thread. Borrowed;
/// valid until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn enf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
