//! C interface to `retract-core`.
//!
//! Posets are opaque handles created by `retract_poset_parse` or
//! `retract_poset_from_edges` and released with `retract_poset_free`.
//! Every fallible function returns a `RetractStatus`; on failure a message
//! is kept per thread and read back with `retract_last_error_message`.
//! Strings handed out by the library are released with `retract_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use retract_core::cli::analyze;
use retract_core::{
    build_c_graph, build_c_max, build_f_graph, bundle_family, decide_retract, export_dot,
    parse_poset, search, Decision, PointSet, Poset, RetractError, MAX_POINTS,
};

/// Opaque poset handle.
pub struct RetractPoset {
    poset: Poset,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetractStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidPoset = 4,
    UnknownPoint = 5,
    /// The pattern does not satisfy the preconditions of the operation.
    BadPattern = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetractGraph {
    Bundles = 0,
    Pattern = 1,
    PatternMax = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: RetractStatus, message: impl Into<String>) -> RetractStatus {
    set_error(message);
    status
}

fn guarded(f: impl FnOnce() -> RetractStatus) -> RetractStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(RetractStatus::Internal, "internal panic"),
    }
}

fn into_raw_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library output has no nul bytes")
        .into_raw()
}

unsafe fn points<'a>(ids: *const usize, len: usize) -> Option<&'a [usize]> {
    match (ids.is_null(), len) {
        (_, 0) => Some(&[]),
        (true, _) => None,
        (false, _) => Some(slice::from_raw_parts(ids, len)),
    }
}

unsafe fn pattern(
    p: &Poset,
    lower: *const usize,
    lower_len: usize,
    upper: *const usize,
    upper_len: usize,
) -> Result<PointSet, RetractStatus> {
    let (Some(lower), Some(upper)) = (points(lower, lower_len), points(upper, upper_len)) else {
        return Err(fail(RetractStatus::NullArgument, "null point array"));
    };
    let mut z = PointSet::EMPTY;
    for &x in lower.iter().chain(upper) {
        if x >= p.len() {
            return Err(fail(
                RetractStatus::UnknownPoint,
                format!("point {x} out of range"),
            ));
        }
        z.insert(x);
    }
    Ok(z)
}

fn retract_status(e: &RetractError) -> RetractStatus {
    match e {
        RetractError::Internal(_) => RetractStatus::Internal,
        _ => RetractStatus::BadPattern,
    }
}

/// Parses a poset in the text file format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn retract_poset_parse(
    text: *const c_char,
    out: *mut *mut RetractPoset,
) -> RetractStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return fail(RetractStatus::NullArgument, "null argument");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(RetractStatus::InvalidUtf8, "input is not UTF-8");
        };
        match parse_poset(text) {
            Ok(poset) => {
                *out = Box::into_raw(Box::new(RetractPoset { poset }));
                RetractStatus::Ok
            }
            Err(e) => fail(RetractStatus::ParseError, e.to_string()),
        }
    })
}

/// Builds a poset on `point_count` points from `edge_count` pairs
/// `edges[2k] < edges[2k+1]`, closed transitively.
///
/// # Safety
/// `edges` must hold `2 * edge_count` values (or be null when the count is
/// zero) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn retract_poset_from_edges(
    point_count: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut RetractPoset,
) -> RetractStatus {
    guarded(|| {
        if out.is_null() {
            return fail(RetractStatus::NullArgument, "null output pointer");
        }
        let Some(flat) = points(edges, edge_count.saturating_mul(2)) else {
            return fail(RetractStatus::NullArgument, "null edge array");
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|e| (e[0], e[1])).collect();
        match Poset::from_relation(point_count, &pairs) {
            Ok(poset) => {
                *out = Box::into_raw(Box::new(RetractPoset { poset }));
                RetractStatus::Ok
            }
            Err(e) => fail(RetractStatus::InvalidPoset, e.to_string()),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `poset` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn retract_poset_free(poset: *mut RetractPoset) {
    if !poset.is_null() {
        drop(Box::from_raw(poset));
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `poset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn retract_poset_point_count(poset: *const RetractPoset) -> usize {
    poset.as_ref().map_or(0, |p| p.poset.len())
}

/// Minimal and maximal points as bit masks (bit `x` set for point `x`).
///
/// # Safety
/// `poset` must be a live handle; `lower` and `upper` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn retract_poset_levels(
    poset: *const RetractPoset,
    lower: *mut u64,
    upper: *mut u64,
) -> RetractStatus {
    let (Some(p), false, false) = (poset.as_ref(), lower.is_null(), upper.is_null()) else {
        return fail(RetractStatus::NullArgument, "null argument");
    };
    *lower = p.poset.lower().bits();
    *upper = p.poset.upper().bits();
    RetractStatus::Ok
}

/// Decides whether the given minimal and maximal points form a retract.
/// On success `*is_retract` is set; when it is true and `map` is not null,
/// the retraction is written to `map[0..point_count]`.
///
/// # Safety
/// Arrays must hold the stated number of ids; `map` must be null or hold
/// one slot per point.
#[no_mangle]
pub unsafe extern "C" fn retract_decide(
    poset: *const RetractPoset,
    lower: *const usize,
    lower_len: usize,
    upper: *const usize,
    upper_len: usize,
    is_retract: *mut bool,
    map: *mut usize,
) -> RetractStatus {
    guarded(|| {
        let (Some(p), false) = (poset.as_ref(), is_retract.is_null()) else {
            return fail(RetractStatus::NullArgument, "null argument");
        };
        let z = match pattern(&p.poset, lower, lower_len, upper, upper_len) {
            Ok(z) => z,
            Err(status) => return status,
        };
        match decide_retract(&p.poset, z) {
            Ok(Decision::Retract(r)) => {
                *is_retract = true;
                if !map.is_null() {
                    slice::from_raw_parts_mut(map, r.map.len()).copy_from_slice(&r.map);
                }
                RetractStatus::Ok
            }
            Ok(Decision::NotRetract) => {
                *is_retract = false;
                RetractStatus::Ok
            }
            Err(e) => fail(retract_status(&e), e.to_string()),
        }
    })
}

/// The analysis report as JSON. Release with `retract_string_free`.
///
/// # Safety
/// `poset` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn retract_analyze_json(
    poset: *const RetractPoset,
    out: *mut *mut c_char,
) -> RetractStatus {
    guarded(|| {
        let (Some(p), false) = (poset.as_ref(), out.is_null()) else {
            return fail(RetractStatus::NullArgument, "null argument");
        };
        match serde_json::to_string(&analyze(&p.poset)) {
            Ok(s) => {
                *out = into_raw_string(s);
                RetractStatus::Ok
            }
            Err(e) => fail(RetractStatus::Internal, e.to_string()),
        }
    })
}

/// A multigraph in DOT. The pattern arrays are ignored for
/// `RETRACT_GRAPH_BUNDLES`. Release with `retract_string_free`.
///
/// # Safety
/// As for `retract_decide`; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn retract_graph_dot(
    poset: *const RetractPoset,
    which: RetractGraph,
    lower: *const usize,
    lower_len: usize,
    upper: *const usize,
    upper_len: usize,
    out: *mut *mut c_char,
) -> RetractStatus {
    guarded(|| {
        let (Some(p), false) = (poset.as_ref(), out.is_null()) else {
            return fail(RetractStatus::NullArgument, "null argument");
        };
        let p = &p.poset;
        let dot = if which == RetractGraph::Bundles {
            export_dot(&build_f_graph(p, &bundle_family(p)), |x| p.name(x))
        } else {
            let z = match pattern(p, lower, lower_len, upper, upper_len) {
                Ok(z) => z,
                Err(status) => return status,
            };
            let (sub, c) = match search::pattern_in(p, z) {
                Ok(found) => found,
                Err(e) => return fail(RetractStatus::BadPattern, e.to_string()),
            };
            let g = if which == RetractGraph::Pattern {
                build_c_graph(&c)
            } else {
                build_c_max(&c)
            };
            export_dot(&g, |k| p.name(sub.to_host[k]))
        };
        *out = into_raw_string(dot);
        RetractStatus::Ok
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn retract_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn retract_status_message(status: RetractStatus) -> *const c_char {
    let text: &'static CStr = match status {
        RetractStatus::Ok => c"ok",
        RetractStatus::NullArgument => c"null argument",
        RetractStatus::InvalidUtf8 => c"invalid UTF-8",
        RetractStatus::ParseError => c"parse error",
        RetractStatus::InvalidPoset => c"invalid poset",
        RetractStatus::UnknownPoint => c"unknown point",
        RetractStatus::BadPattern => c"pattern violates a precondition",
        RetractStatus::Internal => c"internal error",
    };
    text.as_ptr()
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn retract_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Largest supported number of points.
#[no_mangle]
pub extern "C" fn retract_max_points() -> usize {
    MAX_POINTS
}
