//! C ABI for the arc routing toolkit.
//!
//! Instances and solutions are opaque handles created and released by this
//! library; every fallible call returns a [`CarpStatus`] and leaves a
//! human-readable message for [`carp_last_error_message`] on failure.
//! Strings returned through out-parameters are owned by the caller and
//! must be released with [`carp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use carpkit::approx::{lower_bound, solve};
use carpkit::cost::{CostFunction, CostMode};
use carpkit::exact::{solve_exact, OracleError};
use carpkit::format::{parse_instance, parse_solution, write_instance, write_solution};
use carpkit::generate::generate_random;
use carpkit::instance::Instance;
use carpkit::reduction::{metric_closure, reduced_instance};
use carpkit::solution::Solution;
use carpkit::tsp::fig1_instance;
use carpkit::validate::validate;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarpStatus {
    CarpOk = 0,
    CarpNullPointer = 1,
    CarpInvalidUtf8 = 2,
    CarpParseError = 3,
    CarpInfeasible = 4,
    CarpUnsupported = 5,
    CarpRuntimeError = 6,
}

/// Cost table selector for `carp_solution_cost`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarpCostMode {
    CarpCostOriginal = 0,
    CarpCostDownTriangle = 1,
    CarpCostFullTriangle = 2,
}

/// Opaque instance handle.
pub struct CarpInstance {
    inner: Instance,
}

/// Opaque solution handle.
pub struct CarpSolution {
    inner: Solution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

/// Panics must not unwind across the C boundary; they become a status.
fn guarded(f: impl FnOnce() -> CarpStatus) -> CarpStatus {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal error");
            CarpStatus::CarpRuntimeError
        }
    }
}

/// True when every step references an edge of the instance; solutions
/// parsed against a different instance are rejected, not indexed.
fn steps_in_range(solution: &Solution, instance: &Instance) -> bool {
    let edge_count = instance.graph.edges().len();
    solution
        .routes
        .iter()
        .flat_map(|r| &r.steps)
        .all(|s| s.edge < edge_count)
}

/// Message describing the most recent failure on this thread, or null.
/// The pointer stays valid until the next toolkit call on the thread.
#[no_mangle]
pub extern "C" fn carp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// ABI version of this library; bumped on breaking changes.
#[no_mangle]
pub extern "C" fn carp_abi_version() -> u32 {
    1
}

unsafe fn utf8_in<'a>(text: *const c_char) -> Result<&'a str, CarpStatus> {
    if text.is_null() {
        set_error("null text pointer");
        return Err(CarpStatus::CarpNullPointer);
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        set_error("text is not valid UTF-8");
        CarpStatus::CarpInvalidUtf8
    })
}

fn string_out(out: *mut *mut c_char, text: String) -> CarpStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            CarpStatus::CarpOk
        }
        Err(_) => {
            set_error("text contains an interior NUL byte");
            CarpStatus::CarpRuntimeError
        }
    }
}

/// Parses an instance file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer; the
/// returned handle must be released with `carp_instance_free`.
#[no_mangle]
pub unsafe extern "C" fn carp_instance_parse(
    text: *const c_char,
    out: *mut *mut CarpInstance,
) -> CarpStatus {
    clear_error();
    guarded(move || {
        if out.is_null() {
            set_error("null out pointer");
            return CarpStatus::CarpNullPointer;
        }
        let text = match utf8_in(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_instance(text) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(CarpInstance { inner: inst }));
                CarpStatus::CarpOk
            }
            Err(e) => {
                set_error(e.to_string());
                CarpStatus::CarpParseError
            }
        }
    })
}

/// Generates a seeded random instance; parameters as in the CLI `gen`.
///
/// # Safety
/// `out` must be a valid pointer; release the handle with
/// `carp_instance_free`.
#[no_mangle]
pub unsafe extern "C" fn carp_instance_generate(
    seed: u64,
    vertices: usize,
    edge_prob: f64,
    max_cost: u64,
    max_demand: u64,
    capacity: u64,
    out: *mut *mut CarpInstance,
) -> CarpStatus {
    clear_error();
    guarded(move || {
        if out.is_null() {
            set_error("null out pointer");
            return CarpStatus::CarpNullPointer;
        }
        match generate_random(seed, vertices, edge_prob, max_cost, max_demand, capacity) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(CarpInstance { inner: inst }));
                CarpStatus::CarpOk
            }
            Err(e) => {
                set_error(e.to_string());
                CarpStatus::CarpRuntimeError
            }
        }
    })
}

/// Builds the four-city counterexample family instance.
///
/// # Safety
/// `out` must be a valid pointer; release the handle with
/// `carp_instance_free`.
#[no_mangle]
pub unsafe extern "C" fn carp_instance_fig1(
    ell: u64,
    capacity: u64,
    out: *mut *mut CarpInstance,
) -> CarpStatus {
    clear_error();
    guarded(move || {
        if out.is_null() || ell == 0 {
            set_error("null out pointer or zero ell");
            return CarpStatus::CarpNullPointer;
        }
        match fig1_instance(ell, capacity) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(CarpInstance { inner: inst }));
                CarpStatus::CarpOk
            }
            Err(e) => {
                set_error(e.to_string());
                CarpStatus::CarpRuntimeError
            }
        }
    })
}

/// Writes an instance in the text format.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer; release the
/// string with `carp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn carp_instance_write(
    inst: *const CarpInstance,
    out: *mut *mut c_char,
) -> CarpStatus {
    clear_error();
    if inst.is_null() || out.is_null() {
        set_error("null pointer");
        return CarpStatus::CarpNullPointer;
    }
    string_out(out, write_instance(&(*inst).inner))
}

/// # Safety
/// `inst` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn carp_instance_free(inst: *mut CarpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of vertices; 0 for a null handle.
///
/// # Safety
/// `inst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn carp_instance_vertex_count(inst: *const CarpInstance) -> usize {
    if inst.is_null() {
        return 0;
    }
    (*inst).inner.graph.vertex_count()
}

/// Number of edges; 0 for a null handle.
///
/// # Safety
/// `inst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn carp_instance_edge_count(inst: *const CarpInstance) -> usize {
    if inst.is_null() {
        return 0;
    }
    (*inst).inner.graph.edges().len()
}

/// Number of positive-demand edges; 0 for a null handle.
///
/// # Safety
/// `inst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn carp_instance_required_count(inst: *const CarpInstance) -> usize {
    if inst.is_null() {
        return 0;
    }
    (*inst).inner.required_edges().len()
}

/// Vehicle capacity; 0 for a null handle.
///
/// # Safety
/// `inst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn carp_instance_capacity(inst: *const CarpInstance) -> u64 {
    if inst.is_null() {
        return 0;
    }
    (*inst).inner.capacity
}

/// Parses a solution file against an instance.
///
/// # Safety
/// Pointer arguments as in `carp_instance_parse`; release the handle with
/// `carp_solution_free`.
#[no_mangle]
pub unsafe extern "C" fn carp_solution_parse(
    text: *const c_char,
    inst: *const CarpInstance,
    out: *mut *mut CarpSolution,
) -> CarpStatus {
    clear_error();
    guarded(move || {
        if inst.is_null() || out.is_null() {
            set_error("null pointer");
            return CarpStatus::CarpNullPointer;
        }
        let text = match utf8_in(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_solution(text, &(*inst).inner) {
            Ok(sol) => {
                *out = Box::into_raw(Box::new(CarpSolution { inner: sol }));
                CarpStatus::CarpOk
            }
            Err(e) => {
                set_error(e.to_string());
                CarpStatus::CarpParseError
            }
        }
    })
}

/// Writes a solution in the text format.
///
/// # Safety
/// Handles must be live; release the string with `carp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn carp_solution_write(
    sol: *const CarpSolution,
    inst: *const CarpInstance,
    out: *mut *mut c_char,
) -> CarpStatus {
    clear_error();
    if sol.is_null() || inst.is_null() || out.is_null() {
        set_error("null pointer");
        return CarpStatus::CarpNullPointer;
    }
    if !steps_in_range(&(*sol).inner, &(*inst).inner) {
        set_error("solution references edges outside this instance");
        return CarpStatus::CarpParseError;
    }
    string_out(out, write_solution(&(*sol).inner, &(*inst).inner))
}

/// # Safety
/// `sol` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn carp_solution_free(sol: *mut CarpSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Number of routes; 0 for a null handle.
///
/// # Safety
/// `sol` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn carp_solution_route_count(sol: *const CarpSolution) -> usize {
    if sol.is_null() {
        return 0;
    }
    (*sol).inner.routes.len()
}

/// Checks feasibility. Returns `CarpOk` for a feasible solution; for an
/// infeasible one, returns `CarpInfeasible` and, when `report` is
/// non-null, stores one violation per line.
///
/// # Safety
/// Handles must be live; `report` may be null; release the string with
/// `carp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn carp_validate(
    inst: *const CarpInstance,
    sol: *const CarpSolution,
    report: *mut *mut c_char,
) -> CarpStatus {
    clear_error();
    guarded(move || {
        if inst.is_null() || sol.is_null() {
            set_error("null pointer");
            return CarpStatus::CarpNullPointer;
        }
        let verdict = validate(&(*inst).inner, &(*sol).inner);
        if verdict.is_empty() {
            return CarpStatus::CarpOk;
        }
        let text = verdict
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("\n");
        set_error(text.clone());
        if !report.is_null() {
            return match string_out(report, text) {
                CarpStatus::CarpOk => CarpStatus::CarpInfeasible,
                other => other,
            };
        }
        CarpStatus::CarpInfeasible
    })
}

/// Total solution cost under the chosen cost table. The modified tables
/// are derived on the fly from shortest paths.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn carp_solution_cost(
    inst: *const CarpInstance,
    sol: *const CarpSolution,
    mode: CarpCostMode,
    out: *mut u64,
) -> CarpStatus {
    clear_error();
    guarded(move || {
        if inst.is_null() || sol.is_null() || out.is_null() {
            set_error("null pointer");
            return CarpStatus::CarpNullPointer;
        }
        let instance = &(*inst).inner;
        if !steps_in_range(&(*sol).inner, instance) {
            set_error("solution references edges outside this instance");
            return CarpStatus::CarpParseError;
        }
        let cf = match mode {
            CarpCostMode::CarpCostOriginal => CostFunction::original(instance),
            other => match metric_closure(instance) {
                Ok(art) => {
                    if other == CarpCostMode::CarpCostDownTriangle {
                        art.down_costs()
                    } else {
                        art.full_costs()
                    }
                }
                Err(e) => {
                    set_error(e.to_string());
                    return CarpStatus::CarpRuntimeError;
                }
            },
        };
        *out = cf.solution_cost(&(*sol).inner);
        CarpStatus::CarpOk
    })
}

/// Runs the full pipeline. On success stores the solution handle and,
/// when `report` is non-null, the line-oriented report text.
///
/// # Safety
/// `inst` must be live, `out` valid; `report` may be null. Release the
/// handle with `carp_solution_free` and the string with
/// `carp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn carp_solve(
    inst: *const CarpInstance,
    oracle_limit: usize,
    out: *mut *mut CarpSolution,
    report: *mut *mut c_char,
) -> CarpStatus {
    clear_error();
    guarded(move || {
        if inst.is_null() || out.is_null() {
            set_error("null pointer");
            return CarpStatus::CarpNullPointer;
        }
        match solve(&(*inst).inner, oracle_limit) {
            Ok((solution, rep)) => {
                if !report.is_null() {
                    let status = string_out(report, rep.to_text());
                    if status != CarpStatus::CarpOk {
                        return status;
                    }
                }
                *out = Box::into_raw(Box::new(CarpSolution { inner: solution }));
                CarpStatus::CarpOk
            }
            Err(e) => {
                set_error(e.to_string());
                CarpStatus::CarpRuntimeError
            }
        }
    })
}

/// Computes the exact optimum by brute force. Fails with
/// `CarpUnsupported` above the required-edge limit. `witness` may be null
/// when only the optimum is wanted.
///
/// # Safety
/// `inst` must be live and `out` valid; release a non-null witness with
/// `carp_solution_free`.
#[no_mangle]
pub unsafe extern "C" fn carp_solve_exact(
    inst: *const CarpInstance,
    limit: usize,
    out: *mut u64,
    witness: *mut *mut CarpSolution,
) -> CarpStatus {
    clear_error();
    guarded(move || {
        if inst.is_null() || out.is_null() {
            set_error("null pointer");
            return CarpStatus::CarpNullPointer;
        }
        let instance = &(*inst).inner;
        match solve_exact(instance, &CostFunction::original(instance), limit) {
            Ok(result) => {
                *out = result.optimum;
                if !witness.is_null() {
                    *witness = Box::into_raw(Box::new(CarpSolution {
                        inner: result.witness,
                    }));
                }
                CarpStatus::CarpOk
            }
            Err(e @ OracleError::TooManyRequired { .. }) => {
                set_error(e.to_string());
                CarpStatus::CarpUnsupported
            }
            Err(e) => {
                set_error(e.to_string());
                CarpStatus::CarpRuntimeError
            }
        }
    })
}

/// Valid lower bound on the optimum of the instance (metric bound plus
/// the reduction saving).
///
/// # Safety
/// `inst` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn carp_lower_bound(inst: *const CarpInstance, out: *mut u64) -> CarpStatus {
    clear_error();
    guarded(move || {
        if inst.is_null() || out.is_null() {
            set_error("null pointer");
            return CarpStatus::CarpNullPointer;
        }
        let instance = &(*inst).inner;
        match metric_closure(instance) {
            Ok(art) => {
                let metric = reduced_instance(instance, &art, CostMode::FullTriangle);
                *out = lower_bound(&metric, &art) + art.saving();
                CarpStatus::CarpOk
            }
            Err(e) => {
                set_error(e.to_string());
                CarpStatus::CarpRuntimeError
            }
        }
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn carp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
