//! C interface to `grl`.
//!
//! Objects are opaque handles created by `*_parse` or returned by an
//! operation and released with the matching `*_free`. Every function
//! returns a [`GrlStatus`]; on failure, [`grl_last_error`] describes the
//! problem until the next call on the same thread. Strings returned to the
//! caller are released with [`grl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use grl::cutelim::eliminate_cuts;
use grl::print::{proof_to_string, sequent_to_string, ASCII};
use grl::search::{prove, SearchBudget, Verdict};
use grl::semantics::countermodel_to_string;
use grl::{check_proof, parse_proof, parse_sequent, KernelOptions, ProofNode, Sequent};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// The kernel rejected a proof.
    Rejected = 4,
    /// A countermodel was found.
    Refuted = 5,
    /// The search budget ran out.
    Unknown = 6,
    Internal = 7,
}

/// A parsed proof script.
pub struct GrlProof(ProofNode);

/// A parsed sequent.
pub struct GrlSequent(Sequent);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Failure(GrlStatus, String);

type Res = Result<GrlStatus, Failure>;

fn guard(f: impl FnOnce() -> Res) -> GrlStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            GrlStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(GrlStatus::NullArgument, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(GrlStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(GrlStatus::NullArgument, "null handle".into()))
}

fn non_null<T>(p: *mut T) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(GrlStatus::NullArgument, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn grl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn grl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a proof script.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn grl_proof_parse(src: *const c_char, out: *mut *mut GrlProof) -> GrlStatus {
    guard(|| {
        non_null(out)?;
        *out = ptr::null_mut();
        let p = parse_proof(text(src)?).map_err(|e| Failure(GrlStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(GrlProof(p)));
        Ok(GrlStatus::Ok)
    })
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn grl_proof_free(p: *mut GrlProof) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Checks a proof. On success writes its height to `height` if non-null.
///
/// # Safety
/// `p` must be a live handle; `height` null or writable.
#[no_mangle]
pub unsafe extern "C" fn grl_proof_check(p: *const GrlProof, height: *mut usize) -> GrlStatus {
    guard(|| {
        let p = handle(p)?;
        let checked =
            check_proof(&p.0, &KernelOptions::default()).map_err(|r| Failure(GrlStatus::Rejected, r.to_string()))?;
        if !height.is_null() {
            *height = checked.height();
        }
        Ok(GrlStatus::Ok)
    })
}

/// Writes a cut-free proof of the same end-sequent to `out` and the number
/// of reduction steps to `steps` if non-null.
///
/// # Safety
/// `p` must be a live handle, `out` writable, `steps` null or writable.
#[no_mangle]
pub unsafe extern "C" fn grl_proof_eliminate_cuts(
    p: *const GrlProof,
    out: *mut *mut GrlProof,
    steps: *mut usize,
) -> GrlStatus {
    guard(|| {
        non_null(out)?;
        *out = ptr::null_mut();
        let p = handle(p)?;
        let e = eliminate_cuts(&p.0, &KernelOptions::default()).map_err(|e| match e {
            grl::cutelim::CutElimError::Rejected(r) => Failure(GrlStatus::Rejected, r.to_string()),
            other => Failure(GrlStatus::Internal, other.to_string()),
        })?;
        if !steps.is_null() {
            *steps = e.trace.len();
        }
        *out = Box::into_raw(Box::new(GrlProof(e.proof.into_root())));
        Ok(GrlStatus::Ok)
    })
}

/// Renders a proof as a script. Release the result with [`grl_string_free`].
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn grl_proof_to_string(p: *const GrlProof, out: *mut *mut c_char) -> GrlStatus {
    guard(|| {
        non_null(out)?;
        *out = c_string(proof_to_string(&handle(p)?.0, &ASCII));
        Ok(GrlStatus::Ok)
    })
}

/// Writes the end-sequent of a proof. Release the result with
/// [`grl_string_free`].
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn grl_proof_end_sequent(p: *const GrlProof, out: *mut *mut c_char) -> GrlStatus {
    guard(|| {
        non_null(out)?;
        *out = c_string(sequent_to_string(&handle(p)?.0.conclusion, &ASCII));
        Ok(GrlStatus::Ok)
    })
}

/// Parses a sequent such as `P(#a) => P(#a)`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn grl_sequent_parse(src: *const c_char, out: *mut *mut GrlSequent) -> GrlStatus {
    guard(|| {
        non_null(out)?;
        *out = ptr::null_mut();
        let s = parse_sequent(text(src)?).map_err(|e| Failure(GrlStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(GrlSequent(s)));
        Ok(GrlStatus::Ok)
    })
}

/// # Safety
/// `s` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn grl_sequent_free(s: *mut GrlSequent) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Searches for a proof of `goal`. Zero for `max_depth` or `model_cap`
/// selects the default. Returns `GRL_STATUS_OK` with `*proof` set,
/// `GRL_STATUS_REFUTED` with `*countermodel` set if non-null, or
/// `GRL_STATUS_UNKNOWN`.
///
/// # Safety
/// `goal` must be a live handle, `proof` writable, `countermodel` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn grl_prove(
    goal: *const GrlSequent,
    max_depth: usize,
    model_cap: usize,
    proof: *mut *mut GrlProof,
    countermodel: *mut *mut c_char,
) -> GrlStatus {
    guard(|| {
        non_null(proof)?;
        *proof = ptr::null_mut();
        if !countermodel.is_null() {
            *countermodel = ptr::null_mut();
        }
        let goal = handle(goal)?;
        let mut budget = SearchBudget::default();
        if max_depth > 0 {
            budget.max_depth = max_depth;
        }
        if model_cap > 0 {
            budget.model_cap = model_cap;
        }
        match prove(&goal.0, &budget) {
            Verdict::Proved(p) => {
                *proof = Box::into_raw(Box::new(GrlProof(p.into_root())));
                Ok(GrlStatus::Ok)
            }
            Verdict::Refuted(m, v) => {
                if !countermodel.is_null() {
                    *countermodel = c_string(countermodel_to_string(&m, &v));
                }
                Ok(GrlStatus::Refuted)
            }
            Verdict::Unknown(reason) => Err(Failure(GrlStatus::Unknown, reason.to_string())),
        }
    })
}
