//! C interface to `filtk`.
//!
//! Spaces and modules live behind opaque handles that the caller releases
//! with the matching `*_free` function. Every fallible call returns a
//! [`FiltkStatus`]; on failure the message is available from
//! [`filtk_last_error`] until the next call on the same thread. Strings
//! handed out by the library are released with [`filtk_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use filtk::classify::{phantom_verdict, range_check_ck, range_check_unital};
use filtk::functors::{reconstruct_st, restrict};
use filtk::invariants::{is_exact, is_rrz, module_from_value, module_to_value, unit_receptacle, validate_module, Kind, Module, PointedModule};
use filtk::space::FiniteSpace;
use filtk::Error;
use num_bigint::BigInt;

/// Result of a call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FiltkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or an invalid space or module description.
    InvalidInput = 3,
    /// A precondition of the operation fails: unique paths, EBP, exactness,
    /// freeness or applicability.
    Precondition = 4,
    /// An internal consistency check failed or the library panicked.
    Internal = 5,
}

/// `filtk_space_classify` flag bits.
pub const FILTK_UNIQUE_PATH: u32 = 1;
pub const FILTK_EBP: u32 = 2;
pub const FILTK_ACCORDION: u32 = 4;
pub const FILTK_FOREST: u32 = 8;

/// Opaque finite T0-space.
pub struct FiltkSpace {
    inner: Arc<FiniteSpace>,
}

/// Opaque module of any kind, with an optional unit.
pub struct FiltkModule {
    module: Module,
    unit: Option<Vec<BigInt>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FiltkStatus {
    match e {
        Error::SpaceNotUniquePath(_)
        | Error::SpaceNotEBP(_)
        | Error::InputNotExact(_)
        | Error::FreenessHypothesisFailed(_)
        | Error::NotApplicable(_) => FiltkStatus::Precondition,
        Error::InternalInvariantViolation(_) => FiltkStatus::Internal,
        _ => FiltkStatus::InvalidInput,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (FiltkStatus, String)>) -> FiltkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FiltkStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            FiltkStatus::Internal
        }
    }
}

fn lib(e: Error) -> (FiltkStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (FiltkStatus, String) {
    (FiltkStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FiltkStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (FiltkStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T) {
    if !out.is_null() {
        *out = v;
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn filtk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn filtk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn filtk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a space from `{"points": [...], "covers": [[upper, lower], ...]}`.
#[no_mangle]
pub unsafe extern "C" fn filtk_space_from_json(json: *const c_char, out: *mut *mut FiltkSpace) -> FiltkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = FiniteSpace::from_json(read_str(json, "json")?).map_err(lib)?;
        *out = Box::into_raw(Box::new(FiltkSpace { inner: Arc::new(s) }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn filtk_space_free(space: *mut FiltkSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of points, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn filtk_space_len(space: *const FiltkSpace) -> usize {
    space.as_ref().map_or(0, |s| s.inner.len())
}

/// Class flags (`FILTK_UNIQUE_PATH` and friends) and the number of locally
/// closed subsets, including the empty set. Either output may be null.
#[no_mangle]
pub unsafe extern "C" fn filtk_space_classify(space: *const FiltkSpace, flags: *mut u32, lc_count: *mut usize) -> FiltkStatus {
    guard(|| {
        let s = &space.as_ref().ok_or_else(|| null("space"))?.inner;
        let c = s.classify();
        let mut f = 0;
        for (on, bit) in [(c.unique_path, FILTK_UNIQUE_PATH), (c.ebp, FILTK_EBP), (c.accordion, FILTK_ACCORDION), (c.forest, FILTK_FOREST)] {
            if on {
                f |= bit;
            }
        }
        put(flags, f);
        if !lc_count.is_null() {
            *lc_count = s.enumerate_lc().len();
        }
        Ok(())
    })
}

/// Parses a module file. The space must be given inline.
#[no_mangle]
pub unsafe extern "C" fn filtk_module_from_json(json: *const c_char, out: *mut *mut FiltkModule) -> FiltkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let v: serde_json::Value = serde_json::from_str(read_str(json, "json")?).map_err(|e| lib(e.into()))?;
        let (module, unit) = module_from_value(v, None).map_err(lib)?;
        if let Some(u) = &unit {
            PointedModule::new(module.clone(), u.clone()).map_err(lib)?;
        }
        *out = Box::into_raw(Box::new(FiltkModule { module, unit }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn filtk_module_free(module: *mut FiltkModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Serializes a module; release the result with `filtk_string_free`.
#[no_mangle]
pub unsafe extern "C" fn filtk_module_to_json(module: *const FiltkModule, out: *mut *mut c_char) -> FiltkStatus {
    guard(|| {
        let m = module.as_ref().ok_or_else(|| null("module"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = module_to_value(&m.module, m.unit.as_deref());
        *out = to_c_string(v.to_string());
        Ok(())
    })
}

/// Relation, exactness and (for ST-modules) real-rank-zero-like checks.
/// Each output receives 1 or 0 and may be null; `rrz` is 1 for non-ST kinds.
#[no_mangle]
pub unsafe extern "C" fn filtk_module_check(
    module: *const FiltkModule,
    valid: *mut c_int,
    exact: *mut c_int,
    rrz: *mut c_int,
) -> FiltkStatus {
    guard(|| {
        let m = &module.as_ref().ok_or_else(|| null("module"))?.module;
        put(valid, validate_module(m).passed as c_int);
        put(exact, is_exact(m).passed as c_int);
        put(rrz, (m.kind() != Kind::St || is_rrz(m)) as c_int);
        Ok(())
    })
}

/// Rebuilds the ST-module of an exact B-module over an EBP space.
#[no_mangle]
pub unsafe extern "C" fn filtk_module_extend(module: *const FiltkModule, out: *mut *mut FiltkModule) -> FiltkStatus {
    guard(|| {
        let m = &module.as_ref().ok_or_else(|| null("module"))?.module;
        if out.is_null() {
            return Err(null("out"));
        }
        if m.kind() != Kind::B {
            return Err((FiltkStatus::InvalidInput, format!("expected a B-module, got {}", m.kind())));
        }
        let g = filtk::functors::reconstruct(m).map_err(lib)?.module;
        *out = Box::into_raw(Box::new(FiltkModule { module: g, unit: None }));
        Ok(())
    })
}

/// Restricts an ST-module to the given kind: 0 = ST, 1 = B, 2 = R, 3 = TB.
#[no_mangle]
pub unsafe extern "C" fn filtk_module_restrict(module: *const FiltkModule, kind: c_int, out: *mut *mut FiltkModule) -> FiltkStatus {
    guard(|| {
        let m = &module.as_ref().ok_or_else(|| null("module"))?.module;
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match kind {
            0 => Kind::St,
            1 => Kind::B,
            2 => Kind::R,
            3 => Kind::Tb,
            k => return Err((FiltkStatus::InvalidInput, format!("unknown kind {k}"))),
        };
        let r = restrict(m, kind).map_err(lib)?;
        *out = Box::into_raw(Box::new(FiltkModule { module: r, unit: None }));
        Ok(())
    })
}

fn pointed(m: &FiltkModule) -> Result<PointedModule, (FiltkStatus, String)> {
    let unit = match &m.unit {
        Some(u) => u.clone(),
        None => vec![BigInt::from(0); unit_receptacle(&m.module).map_err(lib)?.sum.gens()],
    };
    PointedModule::new(m.module.clone(), unit).map_err(lib)
}

/// Range criteria for an R-module (ST input is restricted first). With
/// `unital` nonzero the unital criteria are evaluated. `realizable`
/// receives the graph verdict (unital or not); `verdict_json`, if not null,
/// the full verdict.
#[no_mangle]
pub unsafe extern "C" fn filtk_module_range_check(
    module: *const FiltkModule,
    unital: c_int,
    realizable: *mut c_int,
    verdict_json: *mut *mut c_char,
) -> FiltkStatus {
    guard(|| {
        let m = module.as_ref().ok_or_else(|| null("module"))?;
        let r = match m.module.kind() {
            Kind::R => m.module.clone(),
            Kind::St => restrict(&m.module, Kind::R).map_err(lib)?,
            k => return Err((FiltkStatus::InvalidInput, format!("range criteria need an R- or ST-module, got {k}"))),
        };
        let v = if unital != 0 {
            let unit = if m.module.kind() == Kind::R { m.unit.clone() } else { None };
            range_check_unital(&pointed(&FiltkModule { module: r, unit })?).map_err(lib)?
        } else {
            range_check_ck(&r).map_err(lib)?
        };
        let flag = if unital != 0 { v.unital_graph_realizable } else { v.graph_realizable };
        put(realizable, flag.unwrap_or(false) as c_int);
        if !verdict_json.is_null() {
            *verdict_json = to_c_string(serde_json::to_string(&v).expect("verdict serializes"));
        }
        Ok(())
    })
}

/// Phantom criteria for a pointed ST- or B-module over an accordion space.
/// A missing unit is taken to be zero.
#[no_mangle]
pub unsafe extern "C" fn filtk_module_phantom(
    module: *const FiltkModule,
    satisfied: *mut c_int,
    verdict_json: *mut *mut c_char,
) -> FiltkStatus {
    guard(|| {
        let m = module.as_ref().ok_or_else(|| null("module"))?;
        let v = phantom_verdict(&pointed(m)?).map_err(lib)?;
        put(satisfied, v.phantom_criteria.unwrap_or(false) as c_int);
        if !verdict_json.is_null() {
            *verdict_json = to_c_string(serde_json::to_string(&v).expect("verdict serializes"));
        }
        Ok(())
    })
}

/// Same as `filtk_module_extend` but through the full ST round trip: the
/// ST-module is restricted to B and rebuilt.
#[no_mangle]
pub unsafe extern "C" fn filtk_module_rebuild(module: *const FiltkModule, out: *mut *mut FiltkModule) -> FiltkStatus {
    guard(|| {
        let m = &module.as_ref().ok_or_else(|| null("module"))?.module;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = reconstruct_st(m).map_err(lib)?.module;
        *out = Box::into_raw(Box::new(FiltkModule { module: g, unit: None }));
        Ok(())
    })
}
