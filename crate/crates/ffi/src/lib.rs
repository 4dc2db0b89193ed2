//! C ABI over the core solver. Handles are opaque pointers owned by the
//! library; every constructor has a matching `_free`, strings returned
//! through out-parameters are released with [`tie_string_free`], and all
//! fallible calls report a [`TieStatus`] with detail available from
//! [`tie_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use tie::engine::{self, Method, TeachingResult, Verification};
use tie::model::{DemonstrationSet, ModelError, TeachingInstance};
use tie::Error;

/// Call outcome. Anything other than `Ok` (and `BudgetExceeded`, which still
/// produces a result) leaves out-parameters untouched.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input could not be read, parsed, or validated.
    ParseError = 3,
    /// The instance admits no consistent weight vector.
    NotRealizable = 4,
    /// Exact search ran out of nodes; the result holds its best cover.
    BudgetExceeded = 5,
    /// The LP layer could not certify an answer.
    NumericalError = 6,
    /// Any other failure, including a caught panic.
    RuntimeError = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieMethod {
    Greedy = 0,
    Exact = 1,
}

pub struct TieInstance {
    inner: TeachingInstance,
}

pub struct TieResult {
    result: TeachingResult,
    /// Rendered at solve time so the instance need not outlive the result.
    json: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes removed");
    });
}

fn fail(status: TieStatus, message: &str) -> TieStatus {
    set_error(message);
    status
}

fn classify(e: &Error) -> TieStatus {
    match e {
        Error::Model(ModelError::NotRealizable) => TieStatus::NotRealizable,
        Error::Model(ModelError::Lp(_)) | Error::Lp(_) | Error::Cone(_) => {
            TieStatus::NumericalError
        }
        Error::Model(_) | Error::Env(_) => TieStatus::ParseError,
        _ => TieStatus::RuntimeError,
    }
}

fn guarded(body: impl FnOnce() -> TieStatus) -> TieStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(TieStatus::RuntimeError, "internal panic"),
    }
}

/// # Safety
/// `ptr` must be non-null and point to a nul-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, TieStatus> {
    if ptr.is_null() {
        return Err(TieStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| TieStatus::InvalidUtf8)
}

/// Most recent error message for this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tie_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses an instance from its JSON form. On `Ok`, `*out` owns the handle.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tie_instance_from_json(
    json: *const c_char,
    out: *mut *mut TieInstance,
) -> TieStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TieStatus::NullArgument, "out pointer is null");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(status) => return fail(status, "instance JSON pointer unusable"),
        };
        match TeachingInstance::from_json_str(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TieInstance { inner }));
                TieStatus::Ok
            }
            Err(e) => fail(TieStatus::ParseError, &e.to_string()),
        }
    })
}

/// Loads an instance from a JSON file.
///
/// # Safety
/// `path` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tie_instance_load(
    path: *const c_char,
    out: *mut *mut TieInstance,
) -> TieStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TieStatus::NullArgument, "out pointer is null");
        }
        let path_str = match read_str(path) {
            Ok(t) => t,
            Err(status) => return fail(status, "path pointer unusable"),
        };
        match TeachingInstance::load(Path::new(path_str)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TieInstance { inner }));
                TieStatus::Ok
            }
            Err(e) => fail(TieStatus::ParseError, &e.to_string()),
        }
    })
}

/// # Safety
/// `instance` must come from a `tie_instance_*` constructor, at most once.
#[no_mangle]
pub unsafe extern "C" fn tie_instance_free(instance: *mut TieInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// # Safety
/// `instance` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tie_instance_num_states(instance: *const TieInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.num_states())
}

/// # Safety
/// `instance` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tie_instance_num_actions(instance: *const TieInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.num_actions())
}

/// # Safety
/// `instance` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tie_instance_dim(instance: *const TieInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.dim())
}

/// Computes a teaching set. `node_budget` of zero means the default ceiling.
/// Returns `Ok` or `BudgetExceeded` with `*out` set; any other status leaves
/// `*out` untouched.
///
/// # Safety
/// `instance` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tie_solve(
    instance: *const TieInstance,
    method: TieMethod,
    node_budget: u64,
    out: *mut *mut TieResult,
) -> TieStatus {
    guarded(|| {
        let handle = match instance.as_ref() {
            Some(h) => h,
            None => return fail(TieStatus::NullArgument, "instance handle is null"),
        };
        if out.is_null() {
            return fail(TieStatus::NullArgument, "out pointer is null");
        }
        let method = match method {
            TieMethod::Greedy => Method::Greedy,
            TieMethod::Exact => Method::Exact,
        };
        let budget = if node_budget == 0 {
            tie::cover::DEFAULT_NODE_BUDGET
        } else {
            node_budget
        };
        match engine::optimal_teach_with_budget(&handle.inner, method, budget) {
            Ok(result) => {
                let exhausted = result.budget_exhausted;
                let json = result.to_json_string(&handle.inner);
                *out = Box::into_raw(Box::new(TieResult { result, json }));
                if exhausted {
                    fail(TieStatus::BudgetExceeded, "node budget exhausted")
                } else {
                    TieStatus::Ok
                }
            }
            Err(e) => fail(classify(&e), &e.to_string()),
        }
    })
}

/// # Safety
/// `result` must come from `tie_solve`, at most once.
#[no_mangle]
pub unsafe extern "C" fn tie_result_free(result: *mut TieResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Number of states in the teaching set, or 0 for null.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tie_result_size(result: *const TieResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.teaching_set.len())
}

/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tie_result_num_extreme_rays(result: *const TieResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.extreme_rays.len())
}

/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tie_result_is_optimal(result: *const TieResult) -> bool {
    result.as_ref().is_some_and(|r| r.result.optimal)
}

/// Copies the result's JSON document into `*out`.
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tie_result_to_json(
    result: *const TieResult,
    out: *mut *mut c_char,
) -> TieStatus {
    guarded(|| {
        let handle = match result.as_ref() {
            Some(h) => h,
            None => return fail(TieStatus::NullArgument, "result handle is null"),
        };
        if out.is_null() {
            return fail(TieStatus::NullArgument, "out pointer is null");
        }
        match CString::new(handle.json.clone()) {
            Ok(s) => {
                *out = s.into_raw();
                TieStatus::Ok
            }
            Err(_) => fail(TieStatus::RuntimeError, "result JSON contains a nul byte"),
        }
    })
}

/// Checks a teaching set given as a JSON array of state ids. On `Ok`,
/// `*valid` holds the verdict; when invalid and `report` is non-null,
/// `*report` receives a counterexample JSON document.
///
/// # Safety
/// `instance` must be a live handle, `teaching_json` a valid nul-terminated
/// string, and `valid` a valid pointer. `report` may be null.
#[no_mangle]
pub unsafe extern "C" fn tie_verify(
    instance: *const TieInstance,
    teaching_json: *const c_char,
    valid: *mut bool,
    report: *mut *mut c_char,
) -> TieStatus {
    guarded(|| {
        let handle = match instance.as_ref() {
            Some(h) => h,
            None => return fail(TieStatus::NullArgument, "instance handle is null"),
        };
        if valid.is_null() {
            return fail(TieStatus::NullArgument, "valid pointer is null");
        }
        let text = match read_str(teaching_json) {
            Ok(t) => t,
            Err(status) => return fail(status, "teaching JSON pointer unusable"),
        };
        let ids: Vec<String> = match serde_json::from_str(text) {
            Ok(ids) => ids,
            Err(e) => return fail(TieStatus::ParseError, &e.to_string()),
        };
        let subset = match DemonstrationSet::from_ids(&handle.inner, &ids) {
            Ok(s) => s,
            Err(e) => return fail(TieStatus::ParseError, &e.to_string()),
        };
        match engine::verify_teaching_set(&handle.inner, &subset) {
            Ok(Verification::Valid) => {
                *valid = true;
                if !report.is_null() {
                    *report = ptr::null_mut();
                }
                TieStatus::Ok
            }
            Ok(Verification::Counterexample { state, alt_action, witness }) => {
                *valid = false;
                if !report.is_null() {
                    let payload = serde_json::json!({
                        "state": handle.inner.state_id(state),
                        "alt_action": handle.inner.action_id(alt_action),
                        "witness": witness,
                    });
                    let rendered = serde_json::to_string(&payload).expect("serializes");
                    *report = CString::new(rendered).expect("no nul bytes").into_raw();
                }
                TieStatus::Ok
            }
            Err(e) => fail(classify(&e), &e.to_string()),
        }
    })
}

/// Releases a string produced by this library.
///
/// # Safety
/// `s` must come from a `tie_*` call returning an owned string, at most once.
#[no_mangle]
pub unsafe extern "C" fn tie_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
