//! C interface to `plane_aut`.
//!
//! Objects are opaque handles created by `pa_*_new`/`pa_*_parse` and released
//! with the matching `pa_*_free`. Every fallible call returns a `PaStatus`;
//! the message of the last failure on the calling thread is available through
//! `pa_last_error`. Strings returned by the library are freed with
//! `pa_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use plane_aut::autgrp::monomial_stabilizer;
use plane_aut::curve_spec::{CurveSpec, MapSpec};
use plane_aut::ff::PrimeField;
use plane_aut::poly::{is_invariant, is_smooth, HomPoly};
use plane_aut::quotient::{branch_data, genus, hurwitz_quotient_genus};
use plane_aut::render::{table_doc, to_json, TableDoc};
use plane_aut::types::View;
use plane_aut::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Field = 5,
    Budget = 6,
    NotInvariant = 7,
    IndexOutOfRange = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PaStatus {
    match e {
        Error::Parse(_) => PaStatus::Parse,
        Error::NotPrime(_) | Error::FieldTooLarge(_) | Error::IncompatibleField { .. } | Error::UnsupportedCharacteristic { .. } => {
            PaStatus::Field
        }
        Error::BudgetExceeded { .. } | Error::TooLarge(_) | Error::Exhausted(_) => PaStatus::Budget,
        Error::NotInvariant(_) => PaStatus::NotInvariant,
        _ => PaStatus::Domain,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (PaStatus, String)>) -> PaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PaStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            PaStatus::Panic
        }
    }
}

fn lib<T>(r: plane_aut::Result<T>) -> Result<T, (PaStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (PaStatus, String) {
    (PaStatus::NullPointer, "null pointer argument".into())
}

unsafe fn as_ref<'a, T>(p: *const T) -> Result<&'a T, (PaStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn as_str<'a>(s: *const c_char) -> Result<&'a str, (PaStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (PaStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (PaStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Prime field F_p.
pub struct PaField(PrimeField);

/// A plane curve over a `PaField`.
pub struct PaCurve(HomPoly);

/// A rendered table of cyclic types.
pub struct PaTable(TableDoc);

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pa_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pa_field_new(p: u64, out: *mut *mut PaField) -> PaStatus {
    guard(|| {
        let f = lib(PrimeField::new(p))?;
        write_out(out, Box::into_raw(Box::new(PaField(f))))
    })
}

/// # Safety
/// `f` must be null or a handle from `pa_field_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_field_free(f: *mut PaField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Parses a curve in the command-line curve syntax over `field`. `beta=random`
/// draws up to `trials` members from `seed`.
///
/// # Safety
/// `field` must be a live handle, `spec` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pa_curve_parse(
    field: *const PaField,
    spec: *const c_char,
    seed: u64,
    trials: u64,
    out: *mut *mut PaCurve,
) -> PaStatus {
    guard(|| {
        let f = &as_ref(field)?.0;
        let spec = lib(CurveSpec::parse(as_str(spec)?))?;
        let c = lib(spec.build(f, seed, trials))?;
        write_out(out, Box::into_raw(Box::new(PaCurve(c.form))))
    })
}

/// # Safety
/// `c` must be null or a handle from `pa_curve_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_curve_free(c: *mut PaCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// The curve as text; free with `pa_string_free`. Null on bad input.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pa_curve_to_string(c: *const PaCurve) -> *mut c_char {
    match c.as_ref() {
        Some(c) => into_c_string(c.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `c` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pa_curve_is_smooth(c: *const PaCurve, out: *mut bool) -> PaStatus {
    guard(|| {
        let s = lib(is_smooth(&as_ref(c)?.0))?;
        write_out(out, s.is_smooth())
    })
}

/// Order of the group of monomial maps fixing the curve.
///
/// # Safety
/// `c` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pa_curve_stabilizer_order(c: *const PaCurve, out: *mut u64) -> PaStatus {
    guard(|| write_out(out, monomial_stabilizer(&as_ref(c)?.0).order as u64))
}

/// Genus of the quotient of the curve by the cyclic group generated by `map`
/// (same syntax as the command line, e.g. `"8:0,1,4"`).
///
/// # Safety
/// `c` must be a live handle, `map` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pa_curve_quotient_genus(c: *const PaCurve, map: *const c_char, out: *mut u64) -> PaStatus {
    guard(|| {
        let form = &as_ref(c)?.0;
        let m = lib(lib(MapSpec::parse(as_str(map)?))?.matrix(form.field()))?;
        if is_invariant(form, &m).is_none() {
            return Err((PaStatus::NotInvariant, "map does not preserve the curve".into()));
        }
        let data = lib(branch_data(form, &m))?;
        write_out(out, lib(hurwitz_quotient_genus(genus(form.degree()), &data))?)
    })
}

/// Table of cyclic types of degree `d`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pa_table_new(d: u32, filtered: bool, complete: bool, out: *mut *mut PaTable) -> PaStatus {
    guard(|| {
        if d < 4 {
            return Err((PaStatus::Domain, format!("degree {d} < 4")));
        }
        let view = if complete { View::Complete } else { View::Published };
        write_out(out, Box::into_raw(Box::new(PaTable(table_doc(d, view, filtered)))))
    })
}

/// # Safety
/// `t` must be null or a handle from `pa_table_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_table_free(t: *mut PaTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pa_table_len(t: *const PaTable) -> usize {
    t.as_ref().map_or(0, |t| t.0.rows.len())
}

/// Order m and exponents (a, b) of row `i`.
///
/// # Safety
/// `t` must be a live handle; `m`, `a`, `b` valid.
#[no_mangle]
pub unsafe extern "C" fn pa_table_row(t: *const PaTable, i: usize, m: *mut u64, a: *mut u64, b: *mut u64) -> PaStatus {
    guard(|| {
        let t = &as_ref(t)?.0;
        let r = t.rows.get(i).ok_or_else(|| (PaStatus::IndexOutOfRange, format!("row {i} of {}", t.rows.len())))?;
        write_out(m, r.m)?;
        write_out(a, r.a)?;
        write_out(b, r.b)
    })
}

/// The table as JSON; free with `pa_string_free`. Null on bad input.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pa_table_json(t: *const PaTable) -> *mut c_char {
    match t.as_ref().map(|t| to_json(&t.0)) {
        Some(Ok(s)) => into_c_string(s),
        _ => ptr::null_mut(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        let mut buf = vec![0 as c_char; 256];
        unsafe { pa_last_error(buf.as_mut_ptr(), buf.len()) };
        unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn field_errors() {
        let mut f = ptr::null_mut();
        assert_eq!(unsafe { pa_field_new(12, &mut f) }, PaStatus::Field);
        assert!(f.is_null());
        assert!(last_error().contains("12"));
        assert_eq!(unsafe { pa_field_new(17, ptr::null_mut()) }, PaStatus::NullPointer);
    }

    #[test]
    fn curve_round_trip() {
        unsafe {
            let mut f = ptr::null_mut();
            assert_eq!(pa_field_new(17, &mut f), PaStatus::Ok);
            let spec = CString::new("d=5 type=8,1,4 alpha=1 beta=3").unwrap();
            let mut c = ptr::null_mut();
            assert_eq!(pa_curve_parse(f, spec.as_ptr(), 1, 10, &mut c), PaStatus::Ok);
            let mut smooth = false;
            assert_eq!(pa_curve_is_smooth(c, &mut smooth), PaStatus::Ok);
            assert!(smooth);
            let mut n = 0;
            assert_eq!(pa_curve_stabilizer_order(c, &mut n), PaStatus::Ok);
            assert_eq!(n, 8);
            let map = CString::new("8:0,1,4").unwrap();
            let mut g0 = 99;
            assert_eq!(pa_curve_quotient_genus(c, map.as_ptr(), &mut g0), PaStatus::Ok);
            assert_eq!(g0, 0);
            let bad = CString::new("8:0,1,2").unwrap();
            assert_eq!(pa_curve_quotient_genus(c, bad.as_ptr(), &mut g0), PaStatus::NotInvariant);
            let s = pa_curve_to_string(c);
            assert!(CStr::from_ptr(s).to_str().unwrap().contains("Y^4Z"));
            pa_string_free(s);
            pa_curve_free(c);
            let junk = CString::new("d=5 type=8").unwrap();
            assert_eq!(pa_curve_parse(f, junk.as_ptr(), 1, 10, &mut c), PaStatus::Parse);
            pa_field_free(f);
        }
    }

    #[test]
    fn tables() {
        unsafe {
            let mut t = ptr::null_mut();
            assert_eq!(pa_table_new(5, true, false, &mut t), PaStatus::Ok);
            assert_eq!(pa_table_len(t), 12);
            let (mut m, mut a, mut b) = (0, 0, 0);
            assert_eq!(pa_table_row(t, 0, &mut m, &mut a, &mut b), PaStatus::Ok);
            assert_eq!(m, 20);
            assert_eq!(pa_table_row(t, 12, &mut m, &mut a, &mut b), PaStatus::IndexOutOfRange);
            let j = pa_table_json(t);
            assert!(CStr::from_ptr(j).to_str().unwrap().contains("\"degree\": 5"));
            pa_string_free(j);
            pa_table_free(t);
            assert_eq!(pa_table_new(3, true, false, &mut t), PaStatus::Domain);
            assert_eq!(pa_table_len(ptr::null()), 0);
        }
    }
}
