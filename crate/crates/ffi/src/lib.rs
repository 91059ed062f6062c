//! C ABI over the starkrankin library.
//!
//! Scenarios are opaque handles created by `sr_scenario_from_json` or
//! `sr_scenario_from_path` and released with `sr_scenario_free`. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! released with `sr_string_free`. Every entry point returns an [`SrStatus`];
//! on failure `sr_last_error` describes the cause for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use starkrankin::cli::{self, Command, Options, Scenario, ScenarioFile};
use starkrankin::error::Error;
use starkrankin::factors::{lambda_general, lambda_padic};
use starkrankin::quadfield::class_group;

/// Status codes. The first five agree with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    /// Resource or internal error.
    Other = 1,
    /// The computation ran and at least one check failed.
    CheckFailed = 2,
    /// Vanishing fudge factor, missing square root or precision loss.
    Degenerate = 3,
    /// Malformed or unsupported input.
    Invalid = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

/// A validated scenario.
pub struct SrScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SrStatus {
    match cli::exit_code(e) {
        cli::EXIT_CHECK_FAILED => SrStatus::CheckFailed,
        cli::EXIT_DEGENERATE => SrStatus::Degenerate,
        cli::EXIT_INVALID => SrStatus::Invalid,
        _ => SrStatus::Other,
    }
}

fn fail(e: Error) -> SrStatus {
    set_last_error(&e.to_string());
    status_of(&e)
}

/// Runs `body`, turning panics into [`SrStatus::Panic`].
fn guard(body: impl FnOnce() -> SrStatus) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => {
            if s == SrStatus::Ok {
                set_last_error("");
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            SrStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, SrStatus> {
    if s.is_null() {
        set_last_error("null string argument");
        return Err(SrStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_last_error("string argument is not UTF-8");
        SrStatus::InvalidUtf8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> SrStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SrStatus::Ok
        }
        Err(_) => {
            set_last_error("output contains an interior NUL byte");
            SrStatus::Other
        }
    }
}

fn command_named(name: &str) -> Option<Command> {
    [
        Command::Classgroup,
        Command::Theta,
        Command::Eisenstein,
        Command::VerifyFactors,
        Command::Lambda,
        Command::Recover,
        Command::All,
    ]
    .into_iter()
    .find(|c| c.name() == name)
}

fn store_scenario(sc: Result<Scenario, Error>, out: *mut *mut SrScenario) -> SrStatus {
    match sc {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(SrScenario { inner })) };
            SrStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Parses and validates a scenario given as JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_scenario_from_json(json: *const c_char, out: *mut *mut SrScenario) -> SrStatus {
    guard(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return SrStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        store_scenario(ScenarioFile::from_json(text).and_then(Scenario::load), out)
    })
}

/// Reads, parses and validates a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_scenario_from_path(path: *const c_char, out: *mut *mut SrScenario) -> SrStatus {
    guard(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return SrStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let path = match read_str(path) {
            Ok(t) => t,
            Err(s) => return s,
        };
        store_scenario(Scenario::from_path(Path::new(path)), out)
    })
}

/// Releases a scenario. Null is ignored.
///
/// # Safety
/// `sc` must come from `sr_scenario_from_*` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_scenario_free(sc: *mut SrScenario) {
    if !sc.is_null() {
        drop(Box::from_raw(sc));
    }
}

/// Runs a command ("classgroup", "theta", "eisenstein", "verify-factors",
/// "lambda", "recover", "all") and writes its JSON report to `*report`.
/// `sc` may be null for commands that do not need a scenario. `seed` may be
/// null to use the scenario seed. The report is written even when the status
/// is not `Ok`.
///
/// # Safety
/// `command` must be a NUL-terminated string, `report` a valid pointer, `sc`
/// null or a live handle, `seed` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sr_run(
    sc: *const SrScenario,
    command: *const c_char,
    seed: *const u64,
    report: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        if report.is_null() {
            set_last_error("null output pointer");
            return SrStatus::NullPointer;
        }
        *report = ptr::null_mut();
        let name = match read_str(command) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(cmd) = command_named(name) else {
            set_last_error(&format!("unknown command {name:?}"));
            return SrStatus::Invalid;
        };
        let scenario = sc.as_ref().map(|s| &s.inner);
        let (r, code) = cli::execute(cmd, scenario, seed.as_ref().copied(), &Options::default(), false);
        let written = write_string(report, r.render());
        if written != SrStatus::Ok {
            return written;
        }
        match code {
            cli::EXIT_OK => SrStatus::Ok,
            cli::EXIT_CHECK_FAILED => {
                set_last_error("one or more checks failed");
                SrStatus::CheckFailed
            }
            other => {
                let msg = r.to_json()["error"]["message"].as_str().unwrap_or("error").to_string();
                set_last_error(&msg);
                match other {
                    cli::EXIT_DEGENERATE => SrStatus::Degenerate,
                    cli::EXIT_INVALID => SrStatus::Invalid,
                    _ => SrStatus::Other,
                }
            }
        }
    })
}

/// Writes λ of the scenario, rendered exactly (e.g. "25/6"), to `*value`.
///
/// # Safety
/// `sc` must be a live handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_lambda(sc: *const SrScenario, value: *mut *mut c_char) -> SrStatus {
    guard(|| {
        if sc.is_null() || value.is_null() {
            set_last_error("null argument");
            return SrStatus::NullPointer;
        }
        *value = ptr::null_mut();
        match lambda_general(&(*sc).inner.factors) {
            Ok(l) => write_string(value, l.value.to_string()),
            Err(e) => fail(e),
        }
    })
}

/// Writes λ embedded in Q_p at the scenario precision, as a p-adic digit
/// expansion, to `*value`.
///
/// # Safety
/// `sc` must be a live handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_lambda_padic(sc: *const SrScenario, value: *mut *mut c_char) -> SrStatus {
    guard(|| {
        if sc.is_null() || value.is_null() {
            set_last_error("null argument");
            return SrStatus::NullPointer;
        }
        *value = ptr::null_mut();
        let s = &(*sc).inner;
        let r = lambda_general(&s.factors).and_then(|l| lambda_padic(&l.value, s.factors.p, s.digits()));
        match r {
            Ok(x) => write_string(value, x.render()),
            Err(e) => fail(e),
        }
    })
}

/// Class number of the imaginary quadratic order of discriminant `disc` < 0.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_class_number(disc: i64, out: *mut u64) -> SrStatus {
    guard(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return SrStatus::NullPointer;
        }
        match class_group(disc) {
            Ok(g) => {
                *out = g.class_number();
                SrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failing call on this thread, or "" after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn sr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
