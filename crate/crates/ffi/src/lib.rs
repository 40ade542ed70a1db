//! C ABI over `ddiq`.
//!
//! Every object crosses the boundary as an opaque pointer owned by the caller
//! and released with the matching `*_free` function. Fallible calls return a
//! [`DdiqStatus`]; on failure [`ddiq_last_error`] describes what went wrong on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ddiq::{EngineRun, Error, FalqonConfig, InteractionGraph, IsingModel, IteFalqonConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdiqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Invalid input: malformed graph, bad parameter, unknown name.
    Validation = 2,
    /// The instance exceeds the qubit limit.
    ResourceGuard = 3,
    Io = 4,
    /// A string argument was not valid UTF-8.
    Utf8 = 5,
    /// An output buffer was too small; the required length was still reported.
    BufferTooSmall = 6,
    Panic = 7,
}

pub struct DdiqGraph(InteractionGraph);

pub struct DdiqModel(IsingModel);

pub struct DdiqRun(EngineRun);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(message).ok());
}

fn fail(status: DdiqStatus, message: impl Into<String>) -> DdiqStatus {
    set_error(message);
    status
}

fn from_error(err: Error) -> DdiqStatus {
    let status = match err.exit_code() {
        3 => DdiqStatus::ResourceGuard,
        4 => DdiqStatus::Io,
        _ => DdiqStatus::Validation,
    };
    fail(status, err.to_string())
}

fn guard(body: impl FnOnce() -> DdiqStatus) -> DdiqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(DdiqStatus::Panic, "internal panic"),
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(DdiqStatus::NullArgument, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

macro_rules! try_ddiq {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return from_error(err),
        }
    };
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, DdiqStatus> {
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(DdiqStatus::Utf8, "string argument is not valid UTF-8"))
}

fn into_c_string(s: String, out: *mut *mut c_char) -> DdiqStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            DdiqStatus::Ok
        }
        Err(_) => fail(DdiqStatus::Validation, "output contains a NUL byte"),
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ddiq_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from a `ddiq_*_to_json` call.
#[no_mangle]
pub unsafe extern "C" fn ddiq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an interaction graph from a JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_graph_from_json(
    json: *const c_char,
    out: *mut *mut DdiqGraph,
) -> DdiqStatus {
    guard(|| {
        non_null!(json, out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let graph = try_ddiq!(InteractionGraph::parse_json(text));
        *out = Box::into_raw(Box::new(DdiqGraph(graph)));
        DdiqStatus::Ok
    })
}

/// Loads a built-in dataset (`"sixdrug"` or `"covid9"`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_graph_builtin(
    name: *const c_char,
    out: *mut *mut DdiqGraph,
) -> DdiqStatus {
    guard(|| {
        non_null!(name, out);
        let name = match read_str(name) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let dataset: ddiq::Dataset = try_ddiq!(name.parse());
        let graph = dataset.graph();
        *out = Box::into_raw(Box::new(DdiqGraph(graph)));
        DdiqStatus::Ok
    })
}

/// Number of drugs in the graph; 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ddiq_graph_drug_count(graph: *const DdiqGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.len())
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_graph_to_json(
    graph: *const DdiqGraph,
    out: *mut *mut c_char,
) -> DdiqStatus {
    guard(|| {
        non_null!(graph, out);
        into_c_string((*graph).0.to_json_pretty(), out)
    })
}

/// # Safety
/// `graph` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ddiq_graph_free(graph: *mut DdiqGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Compiles the maximum-safe-subset objective with harm penalty `alpha`.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_model_mss(
    graph: *const DdiqGraph,
    alpha: f64,
    out: *mut *mut DdiqModel,
) -> DdiqStatus {
    guard(|| {
        non_null!(graph, out);
        let params = try_ddiq!(ddiq::MssParams::new(alpha));
        let model = ddiq::compile_mss(&(*graph).0, &params);
        *out = Box::into_raw(Box::new(DdiqModel(model)));
        DdiqStatus::Ok
    })
}

/// Compiles the synergy-constrained objective selecting `k` drugs.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_model_sco(
    graph: *const DdiqGraph,
    gamma: f64,
    mu: f64,
    k: usize,
    out: *mut *mut DdiqModel,
) -> DdiqStatus {
    guard(|| {
        non_null!(graph, out);
        let params = try_ddiq!(ddiq::ScoParams::new(gamma, mu, k));
        let model = try_ddiq!(ddiq::compile_sco(&(*graph).0, &params));
        *out = Box::into_raw(Box::new(DdiqModel(model)));
        DdiqStatus::Ok
    })
}

/// Number of qubits; 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ddiq_model_qubits(model: *const DdiqModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.n())
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_model_to_json(
    model: *const DdiqModel,
    out: *mut *mut c_char,
) -> DdiqStatus {
    guard(|| {
        non_null!(model, out);
        into_c_string((*model).0.to_json(), out)
    })
}

/// Energy of one assignment given as `len` bytes of 0 or 1, drug 0 first.
///
/// # Safety
/// `bits` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_model_energy(
    model: *const DdiqModel,
    bits: *const u8,
    len: usize,
    out: *mut f64,
) -> DdiqStatus {
    guard(|| {
        non_null!(model, bits, out);
        let bits = std::slice::from_raw_parts(bits, len);
        let assignment = try_ddiq!(ddiq::Assignment::from_bits(bits));
        *out = try_ddiq!(ddiq::energy_of(&(*model).0, &assignment));
        DdiqStatus::Ok
    })
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ddiq_model_free(model: *mut DdiqModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Exhaustive ground-state search.
///
/// Writes the ground energy and the number of minimizers to `count`. Up to
/// `capacity` minimizer basis indices go to `indices` (bit i is drug i);
/// returns `BufferTooSmall` if more exist. `indices` may be null when
/// `capacity` is 0.
///
/// # Safety
/// `indices` must have room for `capacity` values; the other outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_exact_solve(
    model: *const DdiqModel,
    ground_energy: *mut f64,
    indices: *mut u64,
    capacity: usize,
    count: *mut usize,
) -> DdiqStatus {
    guard(|| {
        non_null!(model, ground_energy, count);
        if capacity > 0 {
            non_null!(indices);
        }
        let solution = try_ddiq!(ddiq::exact_solve(&(*model).0));
        let found = solution.ground_indices();
        *ground_energy = solution.ground_energy;
        *count = found.len();
        for (k, &idx) in found.iter().take(capacity).enumerate() {
            *indices.add(k) = idx as u64;
        }
        if found.len() > capacity {
            return fail(
                DdiqStatus::BufferTooSmall,
                format!("{} minimizers, capacity {capacity}", found.len()),
            );
        }
        DdiqStatus::Ok
    })
}

/// Runs FALQON from the uniform superposition.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_run_falqon(
    model: *const DdiqModel,
    dt: f64,
    steps: usize,
    beta_init: f64,
    out: *mut *mut DdiqRun,
) -> DdiqStatus {
    guard(|| {
        non_null!(model, out);
        let config = try_ddiq!(FalqonConfig::new(dt, steps, beta_init));
        let run = try_ddiq!(ddiq::run_falqon(&(*model).0, &config));
        *out = Box::into_raw(Box::new(DdiqRun(run)));
        DdiqStatus::Ok
    })
}

/// Runs FALQON with an imaginary-time filter of strength `dtau` every
/// `ite_period` steps.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_run_ite_falqon(
    model: *const DdiqModel,
    dt: f64,
    steps: usize,
    beta_init: f64,
    dtau: f64,
    ite_period: usize,
    out: *mut *mut DdiqRun,
) -> DdiqStatus {
    guard(|| {
        non_null!(model, out);
        let base = try_ddiq!(FalqonConfig::new(dt, steps, beta_init));
        let config = try_ddiq!(IteFalqonConfig::new(base, dtau, ite_period));
        let run = try_ddiq!(ddiq::run_ite_falqon(&(*model).0, &config));
        *out = Box::into_raw(Box::new(DdiqRun(run)));
        DdiqStatus::Ok
    })
}

/// Number of recorded steps; 0 for a null handle.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ddiq_run_steps(run: *const DdiqRun) -> usize {
    run.as_ref().map_or(0, |r| r.0.trajectory.len())
}

/// Expected energy after the last step.
///
/// # Safety
/// `run` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddiq_run_final_energy(run: *const DdiqRun, out: *mut f64) -> DdiqStatus {
    guard(|| {
        non_null!(run, out);
        match (*run).0.trajectory.final_energy() {
            Some(e) => {
                *out = e;
                DdiqStatus::Ok
            }
            None => fail(DdiqStatus::Validation, "empty trajectory"),
        }
    })
}

/// Copies the per-step control values, energies and filter flags. Any
/// output may be null to skip it; non-null ones need `capacity >=
/// ddiq_run_steps(run)`.
///
/// # Safety
/// Each non-null buffer must have room for `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn ddiq_run_trajectory(
    run: *const DdiqRun,
    betas: *mut f64,
    energies: *mut f64,
    ite_applied: *mut u8,
    capacity: usize,
) -> DdiqStatus {
    guard(|| {
        non_null!(run);
        let records = &(*run).0.trajectory.records;
        if capacity < records.len() {
            return fail(
                DdiqStatus::BufferTooSmall,
                format!("{} steps, capacity {capacity}", records.len()),
            );
        }
        for (k, r) in records.iter().enumerate() {
            if !betas.is_null() {
                *betas.add(k) = r.beta;
            }
            if !energies.is_null() {
                *energies.add(k) = r.energy;
            }
            if !ite_applied.is_null() {
                *ite_applied.add(k) = r.ite_applied as u8;
            }
        }
        DdiqStatus::Ok
    })
}

/// Copies the final measurement distribution over all 2^n basis states.
///
/// # Safety
/// `out` must have room for `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn ddiq_run_probabilities(
    run: *const DdiqRun,
    out: *mut f64,
    capacity: usize,
) -> DdiqStatus {
    guard(|| {
        non_null!(run, out);
        let probs = (*run).0.state.probabilities();
        if capacity < probs.len() {
            return fail(
                DdiqStatus::BufferTooSmall,
                format!("{} states, capacity {capacity}", probs.len()),
            );
        }
        ptr::copy_nonoverlapping(probs.as_ptr(), out, probs.len());
        DdiqStatus::Ok
    })
}

/// # Safety
/// `run` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ddiq_run_free(run: *mut DdiqRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}
