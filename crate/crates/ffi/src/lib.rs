//! C ABI for the dispersion library.
//!
//! Instances and results are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible call returns a
//! [`DispersionError`] code; on failure the message is available from
//! [`dispersion_last_error`] on the same thread until the next failing call.
//! Strings returned through `char **` must be released with
//! [`dispersion_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use dispersion::instance::{generate, parse_instance, write_instance, GeneratorSpec};
use dispersion::milp::{emit, FormulationKind};
use dispersion::solvers::{self, solve_bilevel, BiLevelMode, SolverBudget, Status};
use dispersion::{Error, Family, Instance, ObjectiveKind, Solution};

/// Error codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionError {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    InvalidInstance = 4,
    Io = 5,
    Utf8 = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionObjective {
    MaxSum = 0,
    MaxMin = 1,
    MaxMinSum = 2,
    MinDiff = 3,
    MaxMean = 4,
}

fn objective_arg(code: u32) -> FfiResult<ObjectiveKind> {
    Ok(match code {
        c if c == DispersionObjective::MaxSum as u32 => ObjectiveKind::MaxSum,
        c if c == DispersionObjective::MaxMin as u32 => ObjectiveKind::MaxMin,
        c if c == DispersionObjective::MaxMinSum as u32 => ObjectiveKind::MaxMinSum,
        c if c == DispersionObjective::MinDiff as u32 => ObjectiveKind::MinDiff,
        c if c == DispersionObjective::MaxMean as u32 => ObjectiveKind::MaxMean,
        _ => return Err((DispersionError::InvalidArgument, format!("unknown objective code {code}"))),
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionStatus {
    Optimal = 0,
    Feasible = 1,
    Infeasible = 2,
    BudgetExceeded = 3,
}

impl From<Status> for DispersionStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Optimal => DispersionStatus::Optimal,
            Status::Feasible => DispersionStatus::Feasible,
            Status::Infeasible => DispersionStatus::Infeasible,
            Status::BudgetExceeded => DispersionStatus::BudgetExceeded,
        }
    }
}

/// Solver limits. Zero fields take the library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DispersionBudget {
    pub time_limit_secs: f64,
    pub max_nodes: u64,
}

/// Opaque instance handle.
pub struct DispersionInstance(Instance);

/// Opaque solve result handle.
pub struct DispersionResult {
    status: Status,
    value: Option<f64>,
    subset: Vec<usize>,
    d_star: Option<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_for(e: &Error) -> DispersionError {
    match e {
        Error::Parse { .. } | Error::BadHeader(_) | Error::MissingEntry(..) | Error::SymmetryConflict { .. } => DispersionError::Parse,
        Error::TooFewNodes(_) | Error::InvalidDistance { .. } | Error::InvalidMatrix(_) | Error::DimensionMismatch { .. } => {
            DispersionError::InvalidInstance
        }
        Error::Io(_) => DispersionError::Io,
        _ => DispersionError::InvalidArgument,
    }
}

type FfiResult<T> = std::result::Result<T, (DispersionError, String)>;

fn lib<T>(r: dispersion::Result<T>) -> FfiResult<T> {
    r.map_err(|e| (code_for(&e), e.to_string()))
}

fn null_err(what: &str) -> (DispersionError, String) {
    (DispersionError::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into codes.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> DispersionError {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DispersionError::Ok,
        Ok(Err((code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            DispersionError::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null_err(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (DispersionError::Utf8, format!("{what} is not valid UTF-8")))
}

unsafe fn inst_arg<'a>(p: *const DispersionInstance) -> FfiResult<&'a Instance> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null_err("instance"))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or_else(|| null_err(what))
}

fn to_c_string(s: String) -> FfiResult<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (DispersionError::InvalidArgument, "output contains a nul byte".to_string()))
}

fn budget_of(b: *const DispersionBudget) -> FfiResult<SolverBudget> {
    let mut out = SolverBudget::default();
    // SAFETY: a non-null pointer must reference a valid budget, per the API contract.
    if let Some(b) = unsafe { b.as_ref() } {
        if b.time_limit_secs != 0.0 {
            if !(b.time_limit_secs.is_finite() && b.time_limit_secs > 0.0) {
                return Err((DispersionError::InvalidArgument, "time limit must be positive".into()));
            }
            out.time_limit = Duration::from_secs_f64(b.time_limit_secs);
        }
        if b.max_nodes != 0 {
            out.max_nodes = b.max_nodes;
        }
    }
    Ok(out)
}

/// Message of the last failed call on this thread; empty when none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dispersion_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dispersion_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance from its text format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_instance_parse(text: *const c_char, out: *mut *mut DispersionInstance) -> DispersionError {
    guard(|| {
        let out = out_arg(out, "out")?;
        let inst = lib(parse_instance(str_arg(text, "text")?))?;
        *out = Box::into_raw(Box::new(DispersionInstance(inst)));
        Ok(())
    })
}

/// Generates a benchmark instance. `family` is one of `SOM`, `GKD`,
/// `GKD_D`, `MDG`.
///
/// # Safety
/// `family` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_instance_generate(
    family: *const c_char,
    n: usize,
    m: usize,
    seed: u64,
    out: *mut *mut DispersionInstance,
) -> DispersionError {
    guard(|| {
        let out = out_arg(out, "out")?;
        let family: Family = lib(str_arg(family, "family")?.parse())?;
        let inst = lib(generate(&GeneratorSpec::new(family, n, m, seed)))?;
        *out = Box::into_raw(Box::new(DispersionInstance(inst)));
        Ok(())
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `inst` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dispersion_instance_free(inst: *mut DispersionInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dispersion_instance_n(inst: *const DispersionInstance) -> usize {
    inst.as_ref().map_or(0, |h| h.0.n())
}

/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_instance_distance(
    inst: *const DispersionInstance,
    i: usize,
    j: usize,
    out: *mut f64,
) -> DispersionError {
    guard(|| {
        let inst = inst_arg(inst)?;
        let out = out_arg(out, "out")?;
        for k in [i, j] {
            if k >= inst.n() {
                return lib(Err(Error::IndexOutOfRange { index: k, n: inst.n() }));
            }
        }
        *out = inst.d(i, j);
        Ok(())
    })
}

/// Serializes an instance to its text format.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_instance_write(inst: *const DispersionInstance, out: *mut *mut c_char) -> DispersionError {
    guard(|| {
        let inst = inst_arg(inst)?;
        let out = out_arg(out, "out")?;
        *out = to_c_string(write_instance(inst))?;
        Ok(())
    })
}

unsafe fn subset_arg(inst: &Instance, indices: *const usize, len: usize) -> FfiResult<Solution> {
    let idx = if len == 0 {
        Vec::new()
    } else if indices.is_null() {
        return Err(null_err("indices"));
    } else {
        std::slice::from_raw_parts(indices, len).to_vec()
    };
    lib(Solution::new(inst, idx))
}

/// Objective value of the subset `indices[0..len]` (0-based). `objective`
/// is a [`DispersionObjective`] value.
///
/// # Safety
/// `inst` must be a live handle, `indices` must point to `len` values and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_evaluate(
    inst: *const DispersionInstance,
    objective: u32,
    indices: *const usize,
    len: usize,
    out: *mut f64,
) -> DispersionError {
    guard(|| {
        let inst = inst_arg(inst)?;
        let out = out_arg(out, "out")?;
        let sol = subset_arg(inst, indices, len)?;
        *out = lib(objective_arg(objective)?.evaluate(inst, &sol))?;
        Ok(())
    })
}

/// Solves `objective` (a [`DispersionObjective`] value) exactly. `budget` may be null.
/// For MaxMean, `m` is ignored.
///
/// # Safety
/// `inst` must be a live handle; `budget` null or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_solve(
    inst: *const DispersionInstance,
    objective: u32,
    m: usize,
    budget: *const DispersionBudget,
    out: *mut *mut DispersionResult,
) -> DispersionError {
    guard(|| {
        let inst = inst_arg(inst)?;
        let out = out_arg(out, "out")?;
        let b = budget_of(budget)?;
        let r = lib(solvers::solve(inst, m, objective_arg(objective)?, &b))?;
        *out = Box::into_raw(Box::new(DispersionResult {
            status: r.status,
            value: r.value,
            subset: r.solution.map(|s| s.selected().to_vec()).unwrap_or_default(),
            d_star: None,
        }));
        Ok(())
    })
}

/// Bi-level model: `upper` (MaxSum or MaxMinSum) over the MaxMin optima.
/// `exact` selects branch and bound instead of capped enumeration.
///
/// # Safety
/// `inst` must be a live handle; `budget` null or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_solve_bilevel(
    inst: *const DispersionInstance,
    upper: u32,
    m: usize,
    cap: usize,
    exact: bool,
    budget: *const DispersionBudget,
    out: *mut *mut DispersionResult,
) -> DispersionError {
    guard(|| {
        let inst = inst_arg(inst)?;
        let out = out_arg(out, "out")?;
        let b = budget_of(budget)?;
        let mode = if exact { BiLevelMode::Exact } else { BiLevelMode::Enumerate };
        let r = lib(solve_bilevel(inst, m, objective_arg(upper)?, cap, &b, mode))?;
        *out = Box::into_raw(Box::new(DispersionResult {
            status: r.status,
            value: Some(r.upper_value),
            subset: r.chosen.selected().to_vec(),
            d_star: Some(r.d_star),
        }));
        Ok(())
    })
}

/// # Safety
/// `res` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn dispersion_result_status(res: *const DispersionResult) -> DispersionStatus {
    res.as_ref().map_or(DispersionStatus::Infeasible, |r| r.status.into())
}

/// Objective value; fails with `InvalidArgument` when there is no incumbent.
///
/// # Safety
/// `res` must be a live result handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_result_value(res: *const DispersionResult, out: *mut f64) -> DispersionError {
    guard(|| {
        let r = res.as_ref().ok_or_else(|| null_err("result"))?;
        let out = out_arg(out, "out")?;
        *out = r.value.ok_or((DispersionError::InvalidArgument, "result has no value".to_string()))?;
        Ok(())
    })
}

/// MaxMin optimum of a bi-level result.
///
/// # Safety
/// `res` must be a live result handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_result_d_star(res: *const DispersionResult, out: *mut f64) -> DispersionError {
    guard(|| {
        let r = res.as_ref().ok_or_else(|| null_err("result"))?;
        let out = out_arg(out, "out")?;
        *out = r.d_star.ok_or((DispersionError::InvalidArgument, "not a bi-level result".to_string()))?;
        Ok(())
    })
}

/// Number of selected nodes (0 for a null handle).
///
/// # Safety
/// `res` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn dispersion_result_subset_len(res: *const DispersionResult) -> usize {
    res.as_ref().map_or(0, |r| r.subset.len())
}

/// Copies the selected 0-based indices into `buf[0..cap]`.
///
/// # Safety
/// `res` must be a live result handle and `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn dispersion_result_subset(res: *const DispersionResult, buf: *mut usize, cap: usize) -> DispersionError {
    guard(|| {
        let r = res.as_ref().ok_or_else(|| null_err("result"))?;
        if r.subset.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null_err("buf"));
        }
        if cap < r.subset.len() {
            return Err((DispersionError::BufferTooSmall, format!("need {} slots, got {cap}", r.subset.len())));
        }
        ptr::copy_nonoverlapping(r.subset.as_ptr(), buf, r.subset.len());
        Ok(())
    })
}

/// Releases a result. Null is ignored.
///
/// # Safety
/// `res` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dispersion_result_free(res: *mut DispersionResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Emits a MILP formulation as LP text. `kind` is one of `maxsum-kuo`,
/// `maxsum-w`, `maxmin-kuo`, `maxminsum`, `mindiff`, `node-packing`,
/// `packing-feasibility`; `l` is the threshold for the packing kinds and is
/// ignored otherwise.
///
/// # Safety
/// `inst` must be a live handle, `kind` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dispersion_export_lp(
    inst: *const DispersionInstance,
    kind: *const c_char,
    m: usize,
    l: f64,
    out: *mut *mut c_char,
) -> DispersionError {
    guard(|| {
        let inst = inst_arg(inst)?;
        let out = out_arg(out, "out")?;
        let kind = lib(FormulationKind::parse(str_arg(kind, "kind")?, Some(l)))?;
        *out = to_c_string(lib(emit(inst, m, kind))?)?;
        Ok(())
    })
}
