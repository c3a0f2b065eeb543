//! C interface to the breuil library.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! call returns a [`BrStatus`]; on anything but `BR_STATUS_OK` or
//! `BR_STATUS_CHECK_FAILED` a message is available from
//! [`br_last_error_message`] until the next failing call on the same thread.
//! Strings returned through out-parameters must be released with
//! [`br_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use breuil::cat::SimpleObject;
use breuil::cli::{self, Command, Flags};
use breuil::dprings::{DpRing, RingParams};
use breuil::inertia::{character_of_simple, serre_check, weight_exponents, TameCharacter};
use breuil::Error;

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BrStatus {
    Ok = 0,
    /// The computation ran and some check failed.
    CheckFailed = 1,
    InvalidInput = 2,
    NullPointer = 3,
    /// A library operation failed on valid input.
    MathError = 4,
    /// A caller-supplied buffer is too short.
    BufferTooSmall = 5,
    Panic = 6,
}

/// A cyclic simple object over `GF(p)` with `E(u) = u^e − p`.
pub struct BrSimple {
    inner: SimpleObject,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: BrStatus, msg: impl Into<String>) -> BrStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> BrStatus {
    let status = if e.is_input() { BrStatus::InvalidInput } else { BrStatus::MathError };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> BrStatus) -> BrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(BrStatus::Panic, "internal panic"),
    }
}

/// Builds the cyclic simple object with the given `d` weights.
///
/// # Safety
/// `weights` must point to `d` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_simple_new(
    p: u32,
    e: u32,
    r: u32,
    weights: *const u32,
    d: usize,
    out: *mut *mut BrSimple,
) -> BrStatus {
    guard(|| {
        if out.is_null() || (weights.is_null() && d > 0) {
            return fail(BrStatus::NullPointer, "null argument to br_simple_new");
        }
        *out = ptr::null_mut();
        let raw: &[u32] = if d == 0 { &[] } else { std::slice::from_raw_parts(weights, d) };
        let w: Vec<usize> = raw.iter().map(|&x| x as usize).collect();
        let ring = match DpRing::new(RingParams::standard(p, 1, e, r)) {
            Ok(r) => r,
            Err(err) => return from_error(err),
        };
        match SimpleObject::cyclic(&ring, w) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(BrSimple { inner: s }));
                BrStatus::Ok
            }
            Err(err) => from_error(err),
        }
    })
}

/// # Safety
/// `s` must come from [`br_simple_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn br_simple_free(s: *mut BrSimple) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Rank of the object.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn br_simple_rank(s: *const BrSimple) -> usize {
    s.as_ref().map_or(0, |s| s.inner.d())
}

/// Writes `s_i` and `t_i` (`len ≥ d` entries each) and `v`.
///
/// # Safety
/// `s` must be a live handle; `s_out`, `t_out` must hold `len` values; `v_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_simple_weights(
    s: *const BrSimple,
    s_out: *mut u64,
    t_out: *mut u64,
    len: usize,
    v_out: *mut u64,
) -> BrStatus {
    guard(|| {
        let Some(s) = s.as_ref() else {
            return fail(BrStatus::NullPointer, "null handle");
        };
        if s_out.is_null() || t_out.is_null() || v_out.is_null() {
            return fail(BrStatus::NullPointer, "null output buffer");
        }
        let w = match weight_exponents(&s.inner) {
            Ok(w) => w,
            Err(e) => return from_error(e),
        };
        if len < w.d() {
            return fail(BrStatus::BufferTooSmall, format!("need {} entries, got {len}", w.d()));
        }
        for i in 0..w.d() {
            *s_out.add(i) = w.s[i];
            *t_out.add(i) = w.t[i];
        }
        *v_out = w.v;
        BrStatus::Ok
    })
}

/// Exponent of the fundamental character and the order `p^d` of its group.
///
/// # Safety
/// `s` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_simple_character(s: *const BrSimple, exponent: *mut u64, group_order: *mut u64) -> BrStatus {
    guard(|| {
        let Some(s) = s.as_ref() else {
            return fail(BrStatus::NullPointer, "null handle");
        };
        if exponent.is_null() || group_order.is_null() {
            return fail(BrStatus::NullPointer, "null output");
        }
        match character_of_simple(&s.inner) {
            Ok(info) => {
                *exponent = info.character.exponent;
                *group_order = info.group_order;
                BrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `BR_STATUS_OK` when every module axiom holds, `BR_STATUS_CHECK_FAILED` otherwise.
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn br_simple_validate(s: *const BrSimple) -> BrStatus {
    guard(|| {
        let Some(s) = s.as_ref() else {
            return fail(BrStatus::NullPointer, "null handle");
        };
        let rep = s.inner.to_module().validate();
        if rep.all_pass() {
            BrStatus::Ok
        } else {
            fail(BrStatus::CheckFailed, rep.to_text())
        }
    })
}

/// Checks that every base-p digit of a level-`h` character lies in `[0, er]`.
///
/// # Safety
/// `digits` must point to `h` readable values.
#[no_mangle]
pub unsafe extern "C" fn br_serre_check(p: u32, digits: *const u32, h: usize, e: u32, r: u32) -> BrStatus {
    guard(|| {
        if digits.is_null() || h == 0 {
            return fail(BrStatus::NullPointer, "no digits");
        }
        let d = std::slice::from_raw_parts(digits, h);
        let chi = match TameCharacter::from_digits(p, d) {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        let (ok, rep) = serre_check(&chi, e as usize, r as usize);
        if ok {
            BrStatus::Ok
        } else {
            fail(BrStatus::CheckFailed, rep.to_text())
        }
    })
}

/// Runs a CLI command on a JSON jobfile; the report goes to `*report`.
///
/// # Safety
/// `command` and `jobfile` must be NUL-terminated strings; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_run_json(
    command: *const c_char,
    jobfile: *const c_char,
    as_json: bool,
    report: *mut *mut c_char,
) -> BrStatus {
    guard(|| {
        if command.is_null() || jobfile.is_null() || report.is_null() {
            return fail(BrStatus::NullPointer, "null argument to br_run_json");
        }
        *report = ptr::null_mut();
        let (Ok(cmd), Ok(job)) = (CStr::from_ptr(command).to_str(), CStr::from_ptr(jobfile).to_str()) else {
            return fail(BrStatus::InvalidInput, "arguments are not UTF-8");
        };
        let cmd: Command = match cmd.parse() {
            Ok(c) => c,
            Err(e) => return fail(BrStatus::InvalidInput, e),
        };
        let out = cli::run(cmd, job, &Flags { json: as_json, trunc_degree: None });
        if let Some(e) = &out.error {
            return fail(BrStatus::InvalidInput, e.clone());
        }
        let text = out.render(as_json).replace('\0', " ");
        *report = CString::new(text).expect("NULs removed").into_raw();
        if out.exit_code == cli::EXIT_PASS {
            BrStatus::Ok
        } else {
            BrStatus::CheckFailed
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn br_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failing call on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn br_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
