//! C interface to the `wci` library.
//!
//! Families are opaque handles created by [`wci_family_new`] and released by
//! [`wci_family_free`]. Every fallible call returns a [`WciStatus`] and writes
//! its result through an out-pointer. Strings handed out are NUL-terminated
//! JSON and must be released with [`wci_string_free`].

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use wci::enumerate::{enumerate_kind, Kind};
use wci::error::Error;
use wci::invariants::invariants;
use wci::pair::{Family, Pair};
use wci::smoothness::is_combinatorially_smooth;
use wci::table::{generator_rows, render_json};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WciStatus {
    Ok = 0,
    NullPointer = 1,
    /// Empty weights, a zero entry, or dimension too small.
    InvalidInput = 2,
    /// The Fano index is not positive.
    NotFano = 3,
    /// Unknown enumeration kind.
    BadKind = 4,
    /// A library invariant failed or a panic was caught.
    Internal = 5,
}

impl From<&Error> for WciStatus {
    fn from(e: &Error) -> WciStatus {
        match e {
            Error::NotFano(_) => WciStatus::NotFano,
            Error::Internal(_) | Error::Unsat(_) => WciStatus::Internal,
            _ => WciStatus::InvalidInput,
        }
    }
}

/// Opaque family handle.
pub struct WciFamily {
    family: Family,
}

fn guard(f: impl FnOnce() -> WciStatus) -> WciStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(WciStatus::Internal)
}

unsafe fn slice<'a>(data: *const u64, len: usize) -> Option<&'a [u64]> {
    if len == 0 {
        Some(&[])
    } else if data.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(data, len))
    }
}

fn hand_out(json: String, out: *mut *mut c_char) -> WciStatus {
    match CString::new(json) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            WciStatus::Ok
        }
        Err(_) => WciStatus::Internal,
    }
}

/// Builds a family from `n_weights` weights and `n_degrees` degrees. The
/// lists are normalized; the handle is written to `out`.
///
/// # Safety
/// `weights` and `degrees` must point to that many readable values (either may
/// be null when its length is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wci_family_new(
    weights: *const u64,
    n_weights: usize,
    degrees: *const u64,
    n_degrees: usize,
    out: *mut *mut WciFamily,
) -> WciStatus {
    guard(|| {
        if out.is_null() {
            return WciStatus::NullPointer;
        }
        let (Some(w), Some(d)) = (slice(weights, n_weights), slice(degrees, n_degrees)) else {
            return WciStatus::NullPointer;
        };
        match Pair::new(d.to_vec(), w.to_vec()).and_then(Family::new) {
            Ok(family) => {
                *out = Box::into_raw(Box::new(WciFamily { family }));
                WciStatus::Ok
            }
            Err(e) => WciStatus::from(&e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `family` must come from [`wci_family_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wci_family_free(family: *mut WciFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Sum of weights minus sum of degrees; may be zero or negative.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wci_family_index(family: *const WciFamily, out: *mut i64) -> WciStatus {
    guard(|| match (family.as_ref(), out.is_null()) {
        (Some(f), false) => {
            *out = f.family.fano_index();
            WciStatus::Ok
        }
        _ => WciStatus::NullPointer,
    })
}

/// Writes whether the pair is combinatorially smooth.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wci_family_is_smooth(
    family: *const WciFamily,
    out: *mut bool,
) -> WciStatus {
    guard(|| match (family.as_ref(), out.is_null()) {
        (Some(f), false) => {
            *out = is_combinatorially_smooth(f.family.pair()).smooth;
            WciStatus::Ok
        }
        _ => WciStatus::NullPointer,
    })
}

/// Writes `{"weights","degrees","invariants"}` as JSON. Fails with
/// `NotFano` when the index is not positive.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wci_family_invariants_json(
    family: *const WciFamily,
    out: *mut *mut c_char,
) -> WciStatus {
    guard(|| {
        let Some(f) = family.as_ref() else {
            return WciStatus::NullPointer;
        };
        if out.is_null() {
            return WciStatus::NullPointer;
        }
        let report = match invariants(&f.family) {
            Ok(r) => r,
            Err(e) => return WciStatus::from(&e),
        };
        let value = serde_json::json!({
            "weights": f.family.weights(),
            "degrees": f.family.degrees(),
            "invariants": report,
        });
        match serde_json::to_string_pretty(&value) {
            Ok(s) => hand_out(s, out),
            Err(_) => WciStatus::Internal,
        }
    })
}

/// Generators of the given variance as a JSON array. `kind`: 0 all,
/// 1 projective space, 2 series, 3 semiseries.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wci_enumerate_json(
    variance: u64,
    kind: u32,
    out: *mut *mut c_char,
) -> WciStatus {
    guard(|| {
        if out.is_null() {
            return WciStatus::NullPointer;
        }
        let kind = match kind {
            0 => Kind::All,
            1 => Kind::Pn,
            2 => Kind::Series,
            3 => Kind::Semiseries,
            _ => return WciStatus::BadKind,
        };
        let recs = match enumerate_kind(variance, kind) {
            Ok(r) => r,
            Err(e) => return WciStatus::from(&e),
        };
        let rows = generator_rows(&recs, kind == Kind::All);
        match render_json(&recs, &rows) {
            Ok(s) => hand_out(s, out),
            Err(e) => WciStatus::from(&e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wci_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static description of a status code; unknown codes get a fixed message.
#[no_mangle]
pub extern "C" fn wci_status_message(status: i32) -> *const c_char {
    let msg: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer\0",
        2 => b"invalid input\0",
        3 => b"Fano index is not positive\0",
        4 => b"unknown enumeration kind\0",
        5 => b"internal error\0",
        _ => b"unknown status\0",
    };
    msg.as_ptr().cast()
}

/// Library version, static and NUL-terminated.
#[no_mangle]
pub extern "C" fn wci_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
