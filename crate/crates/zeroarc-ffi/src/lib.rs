//! C ABI for the recurrence zero-set solver.
//!
//! The surface is deliberately small: parse a recurrence from JSON, analyze
//! it into a report, interrogate the report (membership, certification
//! level, JSON), verify a report against exact evaluation, and free what
//! you were given.  All handles are opaque; every fallible call returns a
//! `ZaStatus` and leaves a human-readable explanation in thread-local
//! storage behind `za_last_error_message`.
//!
//! Ownership rules, also repeated in the header:
//! * every `*_parse_*`/`za_analyze` out-pointer hands the caller a handle
//!   that must go back to the matching `*_free`;
//! * strings returned through out-pointers must go to `za_string_free`;
//! * `za_version` and `za_last_error_message` return borrowed pointers that
//!   must NOT be freed — the latter is valid until the next failing call on
//!   the same thread.
//!
//! Panics never cross the boundary: any internal panic is caught and
//! reported as `ZA_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use zeroarc::zeroset::{self, AnalysisOptions};
use zeroarc::{RecurrenceSpec, ZeroSetReport};

/// Result band for every fallible call.  The numeric values match the exit
/// codes of the companion command-line tool where the concepts overlap.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ZaStatus {
    /// The call succeeded.
    Ok = 0,
    /// The input (JSON, recurrence shape, or parameters) was rejected.
    Input = 1,
    /// An internal invariant was violated — a bug in the library, never a
    /// property of the input.
    Internal = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
    /// A string argument was not valid UTF-8.
    BadEncoding = 5,
}

/// A parsed recurrence specification (opaque).
pub struct ZaRecurrence {
    inner: RecurrenceSpec,
}

/// A finished zero-set analysis (opaque).
pub struct ZaReport {
    inner: ZeroSetReport,
}

/// Analysis parameters, by value.  `za_options_default` fills in the same
/// defaults the command-line tool uses; a zero `prime` means "choose the
/// smallest admissible prime".
#[repr(C)]
#[derive(Clone, Copy)]
pub struct ZaOptions {
    /// Working prime, or 0 to search for the smallest admissible one.
    pub prime: u64,
    /// Refinement iterations M; coefficients are certified mod p^(M+1).
    pub precision: u32,
    /// Ceiling for automatic precision escalation on inconclusive classes.
    pub precision_cap: u32,
    /// Exhaustive-evaluation horizon for locating zeros and anchoring
    /// progressions.
    pub horizon: u64,
    /// Give up if the period search exceeds this modulus.
    pub period_cap: u64,
    /// Accept recurrences whose trailing coefficient is a unit only after
    /// passing to an unramified extension (wider prime search).
    pub extension_mode: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).expect("NUL bytes removed"));
    });
}

fn fail(status: ZaStatus, message: &str) -> ZaStatus {
    set_error(message);
    status
}

fn fail_with(err: &zeroarc::Error) -> ZaStatus {
    let status = match err.exit_code() {
        3 => ZaStatus::Internal,
        _ => ZaStatus::Input,
    };
    fail(status, &err.to_string())
}

/// Run a body with panics converted to `ZA_STATUS_INTERNAL`.
fn guarded(body: impl FnOnce() -> ZaStatus) -> ZaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let text = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".to_string());
            fail(ZaStatus::Internal, &format!("internal panic: {text}"))
        }
    }
}

/// # Safety
/// `ptr` must be null or a NUL-terminated string valid for reads.
unsafe fn read_utf8<'a>(ptr: *const c_char) -> Result<&'a str, ZaStatus> {
    if ptr.is_null() {
        return Err(fail(ZaStatus::NullArgument, "string argument is null"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(ZaStatus::BadEncoding, "string argument is not valid UTF-8"))
}

fn options_from(opts: *const ZaOptions) -> AnalysisOptions {
    let defaults = AnalysisOptions::default();
    if opts.is_null() {
        return defaults;
    }
    let opts = unsafe { *opts };
    AnalysisOptions {
        prime: (opts.prime != 0).then_some(opts.prime),
        m_iters: opts.precision,
        m_cap: opts.precision_cap.max(opts.precision),
        horizon: opts.horizon,
        period_cap: opts.period_cap,
        extension_mode: opts.extension_mode,
    }
}

/// Library version as a static string; never free this pointer.
#[no_mangle]
pub extern "C" fn za_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Explanation of the most recent failure on this thread, or null if no
/// call has failed yet.  Borrowed; valid until the next failing call.
#[no_mangle]
pub extern "C" fn za_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// The defaults the command-line tool uses.
#[no_mangle]
pub extern "C" fn za_options_default() -> ZaOptions {
    let d = AnalysisOptions::default();
    ZaOptions {
        prime: d.prime.unwrap_or(0),
        precision: d.m_iters,
        precision_cap: d.m_cap,
        horizon: d.horizon,
        period_cap: d.period_cap,
        extension_mode: d.extension_mode,
    }
}

/// Parse a recurrence from its JSON description.  On success `*out` owns a
/// handle that must be released with `za_recurrence_free`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn za_recurrence_parse_json(
    json: *const c_char,
    out: *mut *mut ZaRecurrence,
) -> ZaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(ZaStatus::NullArgument, "out pointer is null");
        }
        let text = match read_utf8(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match RecurrenceSpec::from_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(ZaRecurrence { inner }));
                ZaStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Check that a recurrence is in solved form with an invertible trailing
/// coefficient (optionally after base extension), without analyzing it.
///
/// # Safety
/// `rec` must be a live handle from `za_recurrence_parse_json`.
#[no_mangle]
pub unsafe extern "C" fn za_recurrence_validate(
    rec: *const ZaRecurrence,
    extension_mode: bool,
) -> ZaStatus {
    guarded(|| {
        let Some(rec) = rec.as_ref() else {
            return fail(ZaStatus::NullArgument, "recurrence handle is null");
        };
        match rec.inner.validate(extension_mode) {
            Ok(_) => ZaStatus::Ok,
            Err(e) => fail_with(&e),
        }
    })
}

/// Release a recurrence handle.  Null is allowed.
///
/// # Safety
/// `rec` must be null or a live handle, and is dead afterwards.
#[no_mangle]
pub unsafe extern "C" fn za_recurrence_free(rec: *mut ZaRecurrence) {
    if !rec.is_null() {
        drop(Box::from_raw(rec));
    }
}

/// Analyze a recurrence into a certified zero-set report.  `opts` may be
/// null for defaults.  On success `*out` owns a handle that must be
/// released with `za_report_free`.
///
/// # Safety
/// `rec` must be a live handle; `opts` null or valid for reads; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn za_analyze(
    rec: *const ZaRecurrence,
    opts: *const ZaOptions,
    out: *mut *mut ZaReport,
) -> ZaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(ZaStatus::NullArgument, "out pointer is null");
        }
        let Some(rec) = rec.as_ref() else {
            return fail(ZaStatus::NullArgument, "recurrence handle is null");
        };
        match zeroset::analyze(&rec.inner, &options_from(opts)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(ZaReport { inner }));
                ZaStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Whether every residue class is certified exactly (`COMPLETE` or
/// `ALL_ZERO`).  Null reports as false.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn za_report_fully_certified(report: *const ZaReport) -> bool {
    report
        .as_ref()
        .is_some_and(|r| r.inner.fully_certified())
}

/// The exit code the command-line tool would report for this analysis:
/// 0 when fully certified, 2 when some class is only bounded or
/// inconclusive.  Null reports as -1.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn za_report_exit_code(report: *const ZaReport) -> i32 {
    match report.as_ref() {
        Some(r) if r.inner.fully_certified() => 0,
        Some(_) => 2,
        None => -1,
    }
}

/// Whether `n` lies in the certified zero set.
///
/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn za_report_contains(
    report: *const ZaReport,
    n: u64,
    out: *mut bool,
) -> ZaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(ZaStatus::NullArgument, "out pointer is null");
        }
        let Some(report) = report.as_ref() else {
            return fail(ZaStatus::NullArgument, "report handle is null");
        };
        *out = report.inner.contains(n);
        ZaStatus::Ok
    })
}

/// Serialize a report to pretty-printed JSON.  The returned string must be
/// released with `za_string_free`.
///
/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn za_report_to_json(
    report: *const ZaReport,
    out: *mut *mut c_char,
) -> ZaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(ZaStatus::NullArgument, "out pointer is null");
        }
        let Some(report) = report.as_ref() else {
            return fail(ZaStatus::NullArgument, "report handle is null");
        };
        match CString::new(report.inner.to_json()) {
            Ok(s) => {
                *out = s.into_raw();
                ZaStatus::Ok
            }
            Err(_) => fail(ZaStatus::Internal, "report JSON contained a NUL byte"),
        }
    })
}

/// Deserialize a report previously produced by `za_report_to_json` (or the
/// command-line tool's `--json` output).  On success `*out` owns a handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn za_report_from_json(
    json: *const c_char,
    out: *mut *mut ZaReport,
) -> ZaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(ZaStatus::NullArgument, "out pointer is null");
        }
        let text = match read_utf8(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match ZeroSetReport::from_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(ZaReport { inner }));
                ZaStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Check a report's membership claims against exact evaluation of the
/// recurrence for all n <= upto.  Writes whether they agree everywhere.
///
/// # Safety
/// `rec` and `report` must be live handles; `agree` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn za_verify(
    rec: *const ZaRecurrence,
    report: *const ZaReport,
    upto: u64,
    agree: *mut bool,
) -> ZaStatus {
    guarded(|| {
        if agree.is_null() {
            return fail(ZaStatus::NullArgument, "out pointer is null");
        }
        let Some(rec) = rec.as_ref() else {
            return fail(ZaStatus::NullArgument, "recurrence handle is null");
        };
        let Some(report) = report.as_ref() else {
            return fail(ZaStatus::NullArgument, "report handle is null");
        };
        match zeroset::verify_report(&report.inner, &rec.inner, upto) {
            Ok((ok, _)) => {
                *agree = ok;
                ZaStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Release a report handle.  Null is allowed.
///
/// # Safety
/// `report` must be null or a live handle, and is dead afterwards.
#[no_mangle]
pub unsafe extern "C" fn za_report_free(report: *mut ZaReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Release a string returned through an out-pointer.  Null is allowed.
///
/// # Safety
/// `s` must be null or exactly as returned by this library, and is dead
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn za_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
