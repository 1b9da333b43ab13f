//! C ABI over `patience-core`.
//!
//! Sequences cross the boundary as opaque [`PtcSequence`] handles. Verdicts
//! come back as a [`PtcStatus`] plus, where requested, a JSON document in a
//! string owned by this library (release it with [`ptc_string_free`]). On any
//! error status, [`ptc_last_error`] describes the failure for the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use patience_core::dominance::dominates;
use patience_core::patience::{
    is_more_patient, is_more_serene, patience_counterexample, PatienceVerdict,
};
use patience_core::{
    weighted_sum, DiscountSequence, Error, PrizeSequence, Rational, SequenceJson, WeightSequence,
};
use serde::Serialize;

/// Result codes. `PTC_OK` and `PTC_FAILS` are verdicts; the rest are errors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtcStatus {
    /// Success, or the relation holds.
    PtcOk = 0,
    /// The relation fails; the output JSON carries the witness.
    PtcFails = 1,
    PtcNullPointer = 2,
    PtcInvalidUtf8 = 3,
    /// Malformed JSON or rational, or a sequence breaking its invariants.
    PtcInvalidInput = 4,
    PtcHorizonMismatch = 5,
    /// A precondition of the operation does not hold (e.g. `x` does not dominate `y`).
    PtcPrecondition = 6,
    PtcPanic = 7,
}

/// Opaque sequence of exact rationals.
pub struct PtcSequence {
    values: Vec<Rational>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(error: &Error) -> PtcStatus {
    match error {
        Error::ParseRational(_)
        | Error::EmptySequence
        | Error::LengthMismatch { .. }
        | Error::NotStrictlyPositive { .. }
        | Error::Negative { .. }
        | Error::NotDecreasing { .. }
        | Error::ParameterOutOfRange { .. }
        | Error::InvalidInput(_)
        | Error::DivisionByZero => PtcStatus::PtcInvalidInput,
        Error::HorizonMismatch { .. } | Error::ExplicitHorizon { .. } => {
            PtcStatus::PtcHorizonMismatch
        }
        _ => PtcStatus::PtcPrecondition,
    }
}

fn fail(status: PtcStatus, message: &str) -> PtcStatus {
    set_last_error(message);
    status
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<PtcStatus, (PtcStatus, String)>) -> PtcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => fail(status, &message),
        Err(_) => fail(PtcStatus::PtcPanic, "internal panic"),
    }
}

fn core_err(e: Error) -> (PtcStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (PtcStatus, String)> {
    if p.is_null() {
        return Err((PtcStatus::PtcNullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (PtcStatus::PtcInvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn seq_arg<'a>(
    p: *const PtcSequence,
    name: &str,
) -> Result<&'a PtcSequence, (PtcStatus, String)> {
    p.as_ref()
        .ok_or_else(|| (PtcStatus::PtcNullPointer, format!("{name} is null")))
}

fn prize(s: &PtcSequence) -> Result<PrizeSequence, (PtcStatus, String)> {
    PrizeSequence::new(s.values.clone()).map_err(core_err)
}

fn discount(s: &PtcSequence) -> Result<DiscountSequence, (PtcStatus, String)> {
    DiscountSequence::new(s.values.clone()).map_err(core_err)
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text).expect("JSON has no nul").into_raw()
}

unsafe fn write_json<T: Serialize>(
    out: *mut *mut c_char,
    value: &T,
) -> Result<(), (PtcStatus, String)> {
    if out.is_null() {
        return Ok(());
    }
    let text = serde_json::to_string(value).expect("serializable");
    *out = into_c_string(text);
    Ok(())
}

fn verdict(holds: bool) -> PtcStatus {
    if holds {
        PtcStatus::PtcOk
    } else {
        PtcStatus::PtcFails
    }
}

/// Message for the last error on this thread, or null. Valid until the next
/// failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn ptc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ptc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"T": n, "values": ["p/q", ...]}` into a new handle.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ptc_sequence_parse(
    json: *const c_char,
    out: *mut *mut PtcSequence,
) -> PtcStatus {
    guard(|| {
        if out.is_null() {
            return Err((PtcStatus::PtcNullPointer, "out is null".into()));
        }
        let text = str_arg(json, "json")?;
        let parsed: SequenceJson =
            serde_json::from_str(text).map_err(|e| (PtcStatus::PtcInvalidInput, e.to_string()))?;
        let values = PrizeSequence::try_from(parsed)
            .map_err(core_err)?
            .into_values();
        *out = Box::into_raw(Box::new(PtcSequence { values }));
        Ok(PtcStatus::PtcOk)
    })
}

/// Builds a handle from `len` rational strings such as `"3/4"` or `"-2"`.
///
/// # Safety
/// `values` must point to `len` nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ptc_sequence_from_strings(
    values: *const *const c_char,
    len: usize,
    out: *mut *mut PtcSequence,
) -> PtcStatus {
    guard(|| {
        if out.is_null() || (values.is_null() && len > 0) {
            return Err((PtcStatus::PtcNullPointer, "values or out is null".into()));
        }
        if len == 0 {
            return Err(core_err(Error::EmptySequence));
        }
        let raw = std::slice::from_raw_parts(values, len);
        let mut parsed = Vec::with_capacity(len);
        for (i, &p) in raw.iter().enumerate() {
            let s = str_arg(p, &format!("values[{i}]"))?;
            parsed.push(s.parse::<Rational>().map_err(core_err)?);
        }
        *out = Box::into_raw(Box::new(PtcSequence { values: parsed }));
        Ok(PtcStatus::PtcOk)
    })
}

/// Number of periods, or 0 for a null handle.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptc_sequence_horizon(seq: *const PtcSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.values.len())
}

/// The sequence as `{"T": n, "values": [...]}`; null for a null handle.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptc_sequence_to_json(seq: *const PtcSequence) -> *mut c_char {
    let Some(s) = seq.as_ref() else {
        return ptr::null_mut();
    };
    let json = SequenceJson {
        horizon: s.values.len(),
        values: s.values.clone(),
    };
    into_c_string(serde_json::to_string(&json).expect("serializable"))
}

/// # Safety
/// `seq` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ptc_sequence_free(seq: *mut PtcSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Partial-sum dominance of `x` over `y`. Writes the verdict JSON to
/// `out_json` unless it is null.
///
/// # Safety
/// Handles must be live; `out_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ptc_dominates(
    x: *const PtcSequence,
    y: *const PtcSequence,
    out_json: *mut *mut c_char,
) -> PtcStatus {
    guard(|| {
        let (x, y) = (prize(seq_arg(x, "x")?)?, prize(seq_arg(y, "y")?)?);
        let v = dominates(&x, &y).map_err(core_err)?;
        write_json(out_json, &v)?;
        Ok(verdict(v.holds))
    })
}

/// `w . x` for a nonnegative decreasing `w`, as a rational string in `out`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ptc_weighted_sum(
    w: *const PtcSequence,
    x: *const PtcSequence,
    out: *mut *mut c_char,
) -> PtcStatus {
    guard(|| {
        if out.is_null() {
            return Err((PtcStatus::PtcNullPointer, "out is null".into()));
        }
        let w = WeightSequence::new(seq_arg(w, "w")?.values.clone()).map_err(core_err)?;
        let x = prize(seq_arg(x, "x")?)?;
        let value = weighted_sum(&w, &x).map_err(core_err)?;
        *out = into_c_string(value.to_string());
        Ok(PtcStatus::PtcOk)
    })
}

unsafe fn discounter_verdict(
    alpha: *const PtcSequence,
    beta: *const PtcSequence,
    out_json: *mut *mut c_char,
    f: fn(&DiscountSequence, &DiscountSequence) -> patience_core::Result<PatienceVerdict>,
) -> PtcStatus {
    guard(|| {
        let a = discount(seq_arg(alpha, "alpha")?)?;
        let b = discount(seq_arg(beta, "beta")?)?;
        let v = f(&a, &b).map_err(core_err)?;
        write_json(out_json, &v)?;
        Ok(verdict(v.holds))
    })
}

/// Is `alpha` more patient than `beta`? Verdict JSON (with witness on failure)
/// goes to `out_json` unless it is null.
///
/// # Safety
/// Handles must be live; `out_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ptc_is_more_patient(
    alpha: *const PtcSequence,
    beta: *const PtcSequence,
    out_json: *mut *mut c_char,
) -> PtcStatus {
    discounter_verdict(alpha, beta, out_json, is_more_patient)
}

/// Is `alpha` more serene than `beta`?
///
/// # Safety
/// Handles must be live; `out_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ptc_is_more_serene(
    alpha: *const PtcSequence,
    beta: *const PtcSequence,
    out_json: *mut *mut c_char,
) -> PtcStatus {
    discounter_verdict(alpha, beta, out_json, is_more_serene)
}

/// A verified pair `{"x": .., "y": ..}` refuting patience of `alpha` over
/// `beta`. Returns `PTC_OK` with nothing written when patience holds, and
/// `PTC_FAILS` with the pair otherwise.
///
/// # Safety
/// Handles must be live; `out_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ptc_patience_counterexample(
    alpha: *const PtcSequence,
    beta: *const PtcSequence,
    out_json: *mut *mut c_char,
) -> PtcStatus {
    guard(|| {
        let a = discount(seq_arg(alpha, "alpha")?)?;
        let b = discount(seq_arg(beta, "beta")?)?;
        match patience_counterexample(&a, &b) {
            Ok(w) => {
                write_json(out_json, &w)?;
                Ok(PtcStatus::PtcFails)
            }
            Err(Error::PatienceHolds) => Ok(PtcStatus::PtcOk),
            Err(e) => Err(core_err(e)),
        }
    })
}
