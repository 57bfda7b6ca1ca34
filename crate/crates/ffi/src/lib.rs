//! C ABI over the `crdu` toolkit.
//!
//! Models are opaque `CrduModel` handles built from the JSON model-file
//! format and released with `crdu_model_free`. Every fallible function
//! returns a `CrduStatus`; on failure `crdu_last_error` describes the cause
//! for the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use crdu::cli::check_property;
use crdu::cli::file::{load, parse_model, LoadedModel};
use crdu::core_polytope::robust_value;
use crdu::error::Error;
use crdu::space::{Act, Event};
use crdu::verify::{run_suite, Suite};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrduStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    NotFound = 5,
    EmptyCore = 6,
    Unsupported = 7,
    Failed = 8,
    Panic = 9,
}

/// A loaded decision model.
pub struct CrduModel {
    inner: LoadedModel,
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

struct Fail(CrduStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::EmptyCore => CrduStatus::EmptyCore,
            Error::Unsupported(_) => CrduStatus::Unsupported,
            _ => CrduStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> CrduStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CrduStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CrduStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(CrduStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Fail(
            CrduStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn model_arg<'a>(m: *const CrduModel) -> Result<&'a LoadedModel, Fail> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null("model"))
}

unsafe fn act_arg(m: &LoadedModel, payoffs: *const f64, len: usize) -> Result<Act, Fail> {
    if payoffs.is_null() {
        return Err(null("payoffs"));
    }
    let s = m.model.space();
    if len != s.len() {
        return Err(Fail(
            CrduStatus::InvalidArgument,
            format!("expected {} payoffs, got {len}", s.len()),
        ));
    }
    let v = std::slice::from_raw_parts(payoffs, len).to_vec();
    Ok(Act::new(s, v)?)
}

fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and provided by the caller for writing.
    unsafe { out.write(v) };
    Ok(())
}

fn boxed(inner: LoadedModel, out: *mut *mut CrduModel) -> Result<(), Fail> {
    write_out(out, Box::into_raw(Box::new(CrduModel { inner })))
}

/// Message for the last failure on this thread, or NULL. The pointer stays
/// valid until the next `crdu_*` call on the same thread.
#[no_mangle]
pub extern "C" fn crdu_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn crdu_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a model from JSON text and stores a new handle in `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn crdu_model_from_json(
    json: *const c_char,
    out: *mut *mut CrduModel,
) -> CrduStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let m =
            parse_model(text, "<memory>").map_err(|e| Fail(CrduStatus::Parse, e.to_string()))?;
        boxed(m, out)
    })
}

/// Loads a model file and stores a new handle in `*out`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn crdu_model_load(
    path: *const c_char,
    out: *mut *mut CrduModel,
) -> CrduStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let m = load(Path::new(path)).map_err(|e| Fail(CrduStatus::Parse, e.to_string()))?;
        boxed(m, out)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `model` must come from `crdu_model_from_json` or `crdu_model_load` and
/// not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn crdu_model_free(model: *mut CrduModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of states of the model's space.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crdu_model_state_count(
    model: *const CrduModel,
    out: *mut usize,
) -> CrduStatus {
    guard(|| write_out(out, model_arg(model)?.model.space().len()))
}

/// Value of the act with `len` payoffs, in state order.
///
/// # Safety
/// `model` must be a live handle, `payoffs` must point to `len` doubles and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crdu_model_value(
    model: *const CrduModel,
    payoffs: *const f64,
    len: usize,
    out: *mut f64,
) -> CrduStatus {
    guard(|| {
        let m = model_arg(model)?;
        let x = act_arg(m, payoffs, len)?;
        write_out(out, m.model.value(&x)?)
    })
}

/// Certainty equivalent of the act.
///
/// # Safety
/// As for `crdu_model_value`.
#[no_mangle]
pub unsafe extern "C" fn crdu_model_certainty_equivalent(
    model: *const CrduModel,
    payoffs: *const f64,
    len: usize,
    out: *mut f64,
) -> CrduStatus {
    guard(|| {
        let m = model_arg(model)?;
        let x = act_arg(m, payoffs, len)?;
        write_out(out, m.model.certainty_equivalent(&x)?)
    })
}

/// Matching probability of the event whose bit `i` marks state `i`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crdu_model_matching_probability(
    model: *const CrduModel,
    event_mask: u32,
    out: *mut f64,
) -> CrduStatus {
    guard(|| {
        let m = model_arg(model)?;
        let n = m.model.space().len();
        let e = Event(event_mask);
        if !e.is_subset(Event::full(n)) {
            return Err(Fail(
                CrduStatus::InvalidArgument,
                format!("event mask {event_mask:#x} names states beyond {n}"),
            ));
        }
        write_out(out, m.model.matching_probability(e)?)
    })
}

/// Minimum over the core of the expected distorted utility of the act.
/// `*exact` is set when the value is known to be the exact minimum.
///
/// # Safety
/// As for `crdu_model_value`; `exact` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crdu_model_robust_value(
    model: *const CrduModel,
    payoffs: *const f64,
    len: usize,
    out: *mut f64,
    exact: *mut bool,
) -> CrduStatus {
    guard(|| {
        let m = model_arg(model)?;
        let x = act_arg(m, payoffs, len)?;
        let cm = m.model.choquet_model().ok_or_else(|| {
            Fail(
                CrduStatus::Unsupported,
                format!("{} models have no capacity", m.model.kind()),
            )
        })?;
        let r = robust_value(cm.utility(), cm.distortion(), cm.capacity(), &x)?;
        if exact.is_null() {
            return Err(null("exact"));
        }
        write_out(exact, r.exact)?;
        write_out(out, r.value)
    })
}

/// Checks a named property such as "supermodular", "exact" or "DS".
///
/// # Safety
/// `model` must be a live handle, `property` NUL-terminated and `holds`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn crdu_model_check(
    model: *const CrduModel,
    property: *const c_char,
    holds: *mut bool,
) -> CrduStatus {
    guard(|| {
        let m = model_arg(model)?;
        let name = str_arg(property, "property")?;
        let row = check_property(&m.model, name).map_err(|msg| {
            let status = if msg.starts_with("unknown property") {
                CrduStatus::NotFound
            } else {
                CrduStatus::InvalidArgument
            };
            Fail(status, msg)
        })?;
        write_out(holds, row.holds)
    })
}

/// Runs a verification suite; `*passed` receives the passing trial count.
/// Returns `CRDU_STATUS_FAILED` when any trial fails.
///
/// # Safety
/// `suite` must be NUL-terminated and `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn crdu_verify(
    suite: *const c_char,
    trials: usize,
    seed: u64,
    passed: *mut usize,
) -> CrduStatus {
    guard(|| {
        let name = str_arg(suite, "suite")?;
        let suite: Suite = name
            .parse()
            .map_err(|_| Fail(CrduStatus::NotFound, format!("unknown suite {name:?}")))?;
        let r = run_suite(suite, trials, seed)?;
        write_out(passed, r.passed)?;
        match r.first_failure {
            None => Ok(()),
            Some((t, msg)) => Err(Fail(CrduStatus::Failed, format!("trial {t}: {msg}"))),
        }
    })
}
