//! C interface. Machines are opaque handles; every call returns a [`ChStatus`] and leaves a
//! message for [`ch_last_error`] when it fails. Strings handed out must be released with
//! [`ch_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use counterheads::bounded::BoundDescriptor;
use counterheads::cli::{cmd_encode, cmd_run, parse_machine_text, Machine};
use counterheads::machine::{run_cm, run_mha, run_rm, RunOptions, RunResult, Verdict};
use counterheads::Error;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or nondeterministic machine file.
    Parse = 3,
    InvalidArgument = 4,
    Unsupported = 5,
    /// The input is not in the bound or uses symbols outside the alphabet.
    BadInput = 6,
    Io = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChVerdict {
    Accept = 0,
    Reject = 1,
    Timeout = 2,
    Fault = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChRunSummary {
    pub verdict: ChVerdict,
    pub steps: u64,
    /// Largest counter or register value reached; 0 for multi-head automata.
    pub max_counter: u64,
}

/// Opaque machine handle.
pub struct ChMachine {
    inner: Machine,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ChStatus {
    match e {
        Error::Parse(_) | Error::Malformed(_) | Error::Nondeterministic(_) => ChStatus::Parse,
        Error::AlphabetMismatch(_) | Error::ReservedSymbol(_) | Error::BoundViolation(_) => ChStatus::BadInput,
        Error::Unsupported(_) => ChStatus::Unsupported,
        Error::InvalidArgument(_) | Error::Timeout { .. } => ChStatus::InvalidArgument,
        Error::Io(_) => ChStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (ChStatus, String)>) -> ChStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ChStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            ChStatus::Internal
        }
    }
}

fn lift(e: Error) -> (ChStatus, String) {
    (status_of(&e), e.to_string())
}

/// # Safety
/// `s` must be null or point to a NUL-terminated string.
unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, (ChStatus, String)> {
    if s.is_null() {
        return Err((ChStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (ChStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn give(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn summary(r: &RunResult) -> ChRunSummary {
    let verdict = match r.verdict {
        Verdict::Accept => ChVerdict::Accept,
        Verdict::Reject => ChVerdict::Reject,
        Verdict::Timeout => ChVerdict::Timeout,
        Verdict::Fault => ChVerdict::Fault,
    };
    ChRunSummary { verdict, steps: r.steps, max_counter: r.trace.max_value() }
}

/// Parses a JSON machine description into a new handle stored in `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ch_machine_load(json: *const c_char, out: *mut *mut ChMachine) -> ChStatus {
    guard(|| {
        if out.is_null() {
            return Err((ChStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let m = parse_machine_text(text(json, "json")?).map_err(lift)?;
        *out = Box::into_raw(Box::new(ChMachine { inner: m }));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `m` must be null or a handle from [`ch_machine_load`] that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn ch_machine_free(m: *mut ChMachine) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Runs the machine on `input` (a decimal number for register machines) for at most
/// `limit` steps.
///
/// # Safety
/// `m` must be a live handle, `input` a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ch_run(
    m: *const ChMachine,
    input: *const c_char,
    limit: u64,
    out: *mut ChRunSummary,
) -> ChStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            return Err((ChStatus::NullPointer, "machine or out is null".into()));
        }
        let input = text(input, "input")?;
        let opts = RunOptions::new(limit);
        let x: Vec<char> = input.chars().collect();
        let r = match &(*m).inner {
            Machine::MultiHead(a) => run_mha(a, &x, opts),
            Machine::Counter(c) => run_cm(c, &x, opts),
            Machine::Register(r) => {
                let n = input
                    .trim()
                    .parse()
                    .map_err(|_| (ChStatus::InvalidArgument, format!("{input:?} is not a number")))?;
                run_rm(r, n, opts)
            }
        }
        .map_err(lift)?;
        *out = summary(&r);
        Ok(())
    })
}

/// Like [`ch_run`] but returns the JSON run report (with trace) in `*out_json`.
///
/// # Safety
/// As for [`ch_run`]; `*out_json` must later be passed to [`ch_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ch_run_json(
    m: *const ChMachine,
    input: *const c_char,
    limit: u64,
    out_json: *mut *mut c_char,
) -> ChStatus {
    guard(|| {
        if m.is_null() || out_json.is_null() {
            return Err((ChStatus::NullPointer, "machine or out_json is null".into()));
        }
        *out_json = ptr::null_mut();
        let out = cmd_run(&(*m).inner, text(input, "input")?, RunOptions::new(limit), true).map_err(lift)?;
        *out_json = give(out.text);
        Ok(())
    })
}

/// Encodes `input` against the comma-separated `bound` words; JSON in `*out_json`.
///
/// # Safety
/// `bound` and `input` must be NUL-terminated strings, `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ch_encode_json(
    bound: *const c_char,
    input: *const c_char,
    out_json: *mut *mut c_char,
) -> ChStatus {
    guard(|| {
        if out_json.is_null() {
            return Err((ChStatus::NullPointer, "out_json is null".into()));
        }
        *out_json = ptr::null_mut();
        let b: BoundDescriptor = text(bound, "bound")?.parse().map_err(lift)?;
        let out = cmd_encode(&b, text(input, "input")?).map_err(lift)?;
        *out_json = give(out.text);
        Ok(())
    })
}

/// Message describing the last failure on this thread, or an empty string. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ch_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn ch_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_error_maps_to_a_nonzero_status() {
        let errors = [
            Error::Parse("x".into()),
            Error::AlphabetMismatch('z'),
            Error::Unsupported("x".into()),
            Error::InvalidArgument("x".into()),
            Error::Io("x".into()),
        ];
        assert!(errors.iter().all(|e| status_of(e) != ChStatus::Ok));
    }

    #[test]
    fn panics_become_internal() {
        assert_eq!(guard(|| panic!("boom")), ChStatus::Internal);
        let msg = unsafe { CStr::from_ptr(ch_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal error");
    }
}
