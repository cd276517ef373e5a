//! C ABI for clusterkit.
//!
//! Families cross the boundary as opaque `ck_family` handles. Reports and
//! parameters that have a JSON form (constructions, solve instances, cluster
//! witnesses, solve results) are exchanged as NUL-terminated UTF-8 JSON.
//! Every fallible call returns a `ck_status`; on failure the message is
//! available from `ck_last_error` on the same thread.
#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clusterkit::cluster::{find_cluster, FindMode};
use clusterkit::family::{construct, io, Construction};
use clusterkit::solver::{solve, SolveInstance};
use clusterkit::{Error, SetFamily};
use serde::Deserialize;

/// Result codes. `CK_OK` is zero; everything else is an error.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ck_status {
    CK_OK = 0,
    CK_NULL_POINTER = 1,
    CK_INVALID_UTF8 = 2,
    CK_PARSE = 3,
    CK_PARAMETER = 4,
    CK_BUDGET = 5,
    CK_INTERNAL = 6,
}

/// Search mode for `ck_find_cluster`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ck_find_mode {
    CK_FIND_EXHAUSTIVE = 0,
    CK_FIND_SIMPLEX_ONLY = 1,
    CK_FIND_SIMPLEX_CLUSTER_ONLY = 2,
}

/// Opaque handle to a uniform set family.
pub struct ck_family {
    inner: SetFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(ck_status, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parameter(_) => ck_status::CK_PARAMETER,
            Error::Parse { .. } => ck_status::CK_PARSE,
            Error::Budget(_) => ck_status::CK_BUDGET,
            Error::Internal(_) => ck_status::CK_INTERNAL,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ck_status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ck_status::CK_OK
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error: panic inside clusterkit");
            ck_status::CK_INTERNAL
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ck_status::CK_NULL_POINTER, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ck_status::CK_INVALID_UTF8, format!("{what} is not valid UTF-8")))
}

unsafe fn family<'a>(p: *const ck_family) -> Result<&'a SetFamily, Failure> {
    p.as_ref()
        .map(|f| &f.inner)
        .ok_or_else(|| Failure(ck_status::CK_NULL_POINTER, "family handle is null".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(ck_status::CK_NULL_POINTER, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON and family text contain no NUL").into_raw()
}

fn json_error(e: serde_json::Error) -> Failure {
    Failure(ck_status::CK_PARSE, format!("parse error: {e}"))
}

// Mirrors `Construction` with 64-bit counts; serde cannot buffer u128 inside
// an internally tagged enum.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ConstructionDoc {
    Star { center: u32 },
    FranklFuredi,
    OddBipartite,
    Lex { rank: u64 },
    Random { size: u64, seed: u64 },
}

impl From<ConstructionDoc> for Construction {
    fn from(doc: ConstructionDoc) -> Self {
        match doc {
            ConstructionDoc::Star { center } => Construction::Star { center },
            ConstructionDoc::FranklFuredi => Construction::FranklFuredi,
            ConstructionDoc::OddBipartite => Construction::OddBipartite,
            ConstructionDoc::Lex { rank } => Construction::Lex { rank: rank.into() },
            ConstructionDoc::Random { size, seed } => Construction::Random { size: size.into(), seed },
        }
    }
}

/// Message for the last failing call on this thread, or "" after a success.
/// The pointer stays valid until the next clusterkit call on this thread.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Build a named family. `construction_json` is an object such as
/// `{"kind":"star","center":1}`, `{"kind":"frankl_furedi"}`,
/// `{"kind":"odd_bipartite"}`, `{"kind":"lex","rank":5}` or
/// `{"kind":"random","size":10,"seed":7}`.
///
/// # Safety
/// `construction_json` must be a NUL-terminated string and `out` a valid
/// pointer. The handle written to `out` must be released with `ck_family_free`.
#[no_mangle]
pub unsafe extern "C" fn ck_family_construct(
    construction_json: *const c_char,
    n: u32,
    k: u32,
    out: *mut *mut ck_family,
) -> ck_status {
    guard(|| {
        let text = read_str(construction_json, "construction")?;
        let doc: ConstructionDoc = serde_json::from_str(text).map_err(json_error)?;
        let inner = construct(&doc.into(), n, k)?;
        write_out(out, Box::into_raw(Box::new(ck_family { inner })))
    })
}

/// Parse a family from its text or JSON form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_family_parse(text: *const c_char, out: *mut *mut ck_family) -> ck_status {
    guard(|| {
        let inner = io::parse(read_str(text, "family text")?)?;
        write_out(out, Box::into_raw(Box::new(ck_family { inner })))
    })
}

/// Release a family handle. Null is ignored.
///
/// # Safety
/// `f` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ck_family_free(f: *mut ck_family) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of members, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_family_size(f: *const ck_family) -> usize {
    f.as_ref().map_or(0, |f| f.inner.len())
}

/// Ambient `n` and uniformity `k`.
///
/// # Safety
/// `f` must be a live handle; `n` and `k` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ck_family_params(f: *const ck_family, n: *mut u32, k: *mut u32) -> ck_status {
    guard(|| {
        let fam = family(f)?;
        write_out(n, fam.n())?;
        write_out(k, fam.k())
    })
}

/// Text serialisation of the family. Free the result with `ck_string_free`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_family_to_text(f: *const ck_family, out: *mut *mut c_char) -> ck_status {
    guard(|| {
        let text = io::to_text(family(f)?);
        write_out(out, into_c_string(text))
    })
}

/// Uniform measure `|F| / C(|X|, k)` as an exact `"a/b"` string.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_family_measure(f: *const ck_family, out: *mut *mut c_char) -> ck_status {
    guard(|| {
        let text = family(f)?.measure().to_string();
        write_out(out, into_c_string(text))
    })
}

/// Look for a `(d,k,s)`-cluster. `mode` is a `ck_find_mode` value.
/// `*found` tells whether one exists; when it does, `*witness_json` receives
/// the witness document, otherwise null.
///
/// # Safety
/// `f` must be a live handle; `found` and `witness_json` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ck_find_cluster(
    f: *const ck_family,
    d: u32,
    s: u32,
    mode: u32,
    found: *mut bool,
    witness_json: *mut *mut c_char,
) -> ck_status {
    guard(|| {
        let fam = family(f)?;
        let mode = match mode {
            m if m == ck_find_mode::CK_FIND_EXHAUSTIVE as u32 => FindMode::Exhaustive,
            m if m == ck_find_mode::CK_FIND_SIMPLEX_ONLY as u32 => FindMode::SimplexOnly,
            m if m == ck_find_mode::CK_FIND_SIMPLEX_CLUSTER_ONLY as u32 => FindMode::SimplexClusterOnly,
            m => return Err(Failure(ck_status::CK_PARAMETER, format!("unknown find mode {m}"))),
        };
        let w = find_cluster(fam, d, s, mode);
        write_out(found, w.is_some())?;
        let json = w.map_or(ptr::null_mut(), |w| {
            into_c_string(serde_json::to_string(&w.to_doc()).expect("witnesses serialise"))
        });
        write_out(witness_json, json)
    })
}

/// Run the extremal solver. `instance_json` holds at least
/// `{"d":..,"k":..,"s":..,"n":..,"mode":"exact"|"verify_star"|"greedy"}`;
/// `budget`, `seed`, `restarts`, `check_uniqueness` (default false) and
/// `relabel` are optional.
/// The result document is written to `*result_json`.
///
/// # Safety
/// `instance_json` must be a NUL-terminated string and `result_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_solve(instance_json: *const c_char, result_json: *mut *mut c_char) -> ck_status {
    guard(|| {
        let inst: SolveInstance = serde_json::from_str(read_str(instance_json, "instance")?).map_err(json_error)?;
        let r = solve(&inst)?;
        write_out(result_json, into_c_string(serde_json::to_string(&r).expect("results serialise")))
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
