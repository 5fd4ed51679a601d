//! C interface to the cherrypick solver.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `cp_*_free`. Every fallible call returns a
//! [`CpStatus`]; on failure a message is kept per thread and can be fetched
//! with [`cp_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cherrypick::cps::validate_trace;
use cherrypick::io::{parse_forest, parse_network, parse_trace, serialize_forest, serialize_network, serialize_trace};
use cherrypick::search::greedy_cps;
use cherrypick::{
    build_network, min_weight_cps, BuildError, CpsError, Forest, OracleError, PhyloNetwork, ReductionTrace,
    SearchOptions, SearchOutcome,
};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    LabelMismatch = 4,
    BudgetExhausted = 5,
    InvalidTrace = 6,
    Network = 7,
    ScaleGuard = 8,
    Panic = 9,
}

pub struct CpForest(Forest);

pub struct CpNetwork(PhyloNetwork);

pub struct CpTrace(ReductionTrace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CpStatus, String);

fn fail(status: CpStatus, e: impl ToString) -> Failure {
    Failure(status, e.to_string())
}

impl From<CpsError> for Failure {
    fn from(e: CpsError) -> Self {
        let status = match e {
            CpsError::GroundSetMismatch => CpStatus::LabelMismatch,
            _ => CpStatus::InvalidTrace,
        };
        fail(status, e)
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::InvalidTrace(e) => e.into(),
            other => fail(CpStatus::Network, other),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let status = match e {
            OracleError::ScaleGuard(_) | OracleError::CapExceeded(_) => CpStatus::ScaleGuard,
            OracleError::LabelMismatch | OracleError::UnknownLabel(_) => CpStatus::LabelMismatch,
            OracleError::TooSmall => CpStatus::Network,
        };
        fail(status, e)
    }
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| e.borrow_mut().take());
            CpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CpStatus::Panic
        }
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

unsafe fn read_text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(fail(CpStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(CpStatus::InvalidUtf8, e))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(CpStatus::NullArgument, "null handle"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(CpStatus::NullArgument, "null output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(CpStatus::NullArgument, "null output pointer"));
    }
    *out = CString::new(s).map_err(|e| fail(CpStatus::InvalidUtf8, e))?.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Free with
/// [`cp_string_free`].
#[no_mangle]
pub extern "C" fn cp_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone().map_or(ptr::null_mut(), CString::into_raw))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a forest document, one Newick tree per line.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_forest_parse(text: *const c_char, out: *mut *mut CpForest) -> CpStatus {
    guard(|| {
        let f = parse_forest(read_text(text)?).map_err(|e| fail(CpStatus::Parse, e))?;
        put(out, CpForest(f))
    })
}

/// # Safety
/// `f` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cp_forest_free(f: *mut CpForest) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Canonical Newick text of `f`. Free with [`cp_string_free`].
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_forest_to_string(f: *const CpForest, out: *mut *mut c_char) -> CpStatus {
    guard(|| put_string(out, serialize_forest(&get(f)?.0)))
}

/// Number of leaves of `f`, or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_forest_label_count(f: *const CpForest) -> usize {
    f.as_ref().map_or(0, |f| f.0.label_count())
}

/// Parses an edge-list network document. Multi-edges are rejected.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_network_parse(text: *const c_char, out: *mut *mut CpNetwork) -> CpStatus {
    guard(|| {
        let n = parse_network(read_text(text)?).map_err(|e| fail(CpStatus::Parse, e))?;
        let n = n.into_phylo().map_err(|e| fail(CpStatus::Network, e))?;
        put(out, CpNetwork(n))
    })
}

/// # Safety
/// `n` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cp_network_free(n: *mut CpNetwork) {
    if !n.is_null() {
        drop(Box::from_raw(n));
    }
}

/// Edge-list text of `n`. Free with [`cp_string_free`].
///
/// # Safety
/// `n` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_network_to_string(n: *const CpNetwork, out: *mut *mut c_char) -> CpStatus {
    guard(|| put_string(out, serialize_network(get(n)?.0.as_pseudo())))
}

/// Reticulation number of `n`, or 0 for NULL.
///
/// # Safety
/// `n` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_network_reticulation_number(n: *const CpNetwork) -> usize {
    n.as_ref().map_or(0, |n| n.0.reticulation_number())
}

/// Parses a JSON trace document. Steps are checked against their rule but
/// not replayed.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_trace_parse(text: *const c_char, out: *mut *mut CpTrace) -> CpStatus {
    guard(|| {
        let tr = parse_trace(read_text(text)?).map_err(|e| fail(CpStatus::Parse, e))?;
        put(out, CpTrace(tr))
    })
}

/// # Safety
/// `t` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cp_trace_free(t: *mut CpTrace) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// JSON text of `t`. Free with [`cp_string_free`].
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_trace_to_string(t: *const CpTrace, out: *mut *mut c_char) -> CpStatus {
    guard(|| put_string(out, serialize_trace(&get(t)?.0)))
}

/// Hybrid number of two forests on the same leaves. `budget` of 0 means no
/// limit; when the budget runs out the status is `BudgetExhausted` and
/// `weight` receives the best upper bound found. `trace` may be NULL;
/// otherwise it receives the witness.
///
/// # Safety
/// `f1` and `f2` must be live handles, `weight` writable, and `trace` NULL
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn cp_hybrid_number(
    f1: *const CpForest,
    f2: *const CpForest,
    budget: u64,
    threads: usize,
    weight: *mut usize,
    trace: *mut *mut CpTrace,
) -> CpStatus {
    guard(|| {
        let (a, b) = (&get(f1)?.0, &get(f2)?.0);
        if weight.is_null() {
            return Err(fail(CpStatus::NullArgument, "null output pointer"));
        }
        let opts = SearchOptions {
            budget: (budget > 0).then_some(budget),
            threads: threads.max(1),
        };
        let r = min_weight_cps(a, b, &opts)?;
        let (w, best, done) = match r.outcome {
            SearchOutcome::Exact { min_weight, witness } => (min_weight, witness, true),
            SearchOutcome::Bounded { upper, best, .. } => (upper, best, false),
        };
        *weight = w;
        if !trace.is_null() {
            put(trace, CpTrace(best))?;
        }
        if done {
            Ok(())
        } else {
            Err(fail(CpStatus::BudgetExhausted, format!("budget exhausted, best weight {w}")))
        }
    })
}

/// A valid, not necessarily optimal, trace.
///
/// # Safety
/// `f1` and `f2` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_greedy_trace(f1: *const CpForest, f2: *const CpForest, out: *mut *mut CpTrace) -> CpStatus {
    guard(|| {
        let tr = greedy_cps(&get(f1)?.0, &get(f2)?.0)?;
        put(out, CpTrace(tr))
    })
}

/// Replays `t` on the two forests and writes its weight.
///
/// # Safety
/// All handles must be live and `weight` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_validate_trace(
    f1: *const CpForest,
    f2: *const CpForest,
    t: *const CpTrace,
    weight: *mut usize,
) -> CpStatus {
    guard(|| {
        let w = validate_trace(&get(f1)?.0, &get(f2)?.0, &get(t)?.0)?;
        if weight.is_null() {
            return Err(fail(CpStatus::NullArgument, "null output pointer"));
        }
        *weight = w;
        Ok(())
    })
}

/// Builds a network displaying both forests from a valid trace.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_build_network(
    f1: *const CpForest,
    f2: *const CpForest,
    t: *const CpTrace,
    out: *mut *mut CpNetwork,
) -> CpStatus {
    guard(|| {
        let n = build_network(&get(f1)?.0, &get(f2)?.0, &get(t)?.0)?;
        put(out, CpNetwork(n))
    })
}

/// Writes whether `n` displays `f`.
///
/// # Safety
/// Both handles must be live and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_displays(n: *const CpNetwork, f: *const CpForest, result: *mut bool) -> CpStatus {
    guard(|| {
        let found = cherrypick::oracles::displays(get(n)?.0.as_pseudo(), &get(f)?.0)?;
        if result.is_null() {
            return Err(fail(CpStatus::NullArgument, "null output pointer"));
        }
        *result = found.is_some();
        Ok(())
    })
}
