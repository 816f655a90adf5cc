//! C ABI for the eulergap library. Handles are opaque pointers created and
//! destroyed here; every fallible call returns an `EgStatus` and stores a
//! human-readable message retrievable with `eg_last_error`.
//!
//! The status codes mirror the CLI exit codes: 2 invalid input, 3 numerical
//! failure or non-convergence, 4 infeasible.

use eulergap::graph::{
    brute_force_optimum, BruteForceInstance, DirectedGraph, Hypergraph, VertexWeights,
};
use eulergap::rounding::{hypergraph_cut, spectral_cut, CutOptions};
use eulergap::spectral::{gamma2_hypergraph, max_reweighted_gap, Mode, SolveOptions};
use libc::{c_char, c_int, size_t};
use std::cell::RefCell;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Opaque directed graph handle.
pub struct EgGraph {
    inner: DirectedGraph,
}

/// Opaque hypergraph handle.
pub struct EgHypergraph {
    inner: Hypergraph,
}

/// Call outcome; nonzero values match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum EgStatus {
    Ok = 0,
    Internal = 1,
    Invalid = 2,
    Numerical = 3,
    Infeasible = 4,
}

/// Capacity mode of the reweighted-gap programs.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum EgMode {
    Vertex = 0,
    Edge = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &eulergap::Error) -> EgStatus {
    match err {
        eulergap::Error::Infeasible(_) => EgStatus::Infeasible,
        eulergap::Error::Numerical(_) => EgStatus::Numerical,
        _ => EgStatus::Invalid,
    }
}

fn guard(body: impl FnOnce() -> Result<(), (EgStatus, String)>) -> EgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => EgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EgStatus::Internal
        }
    }
}

fn lift<T>(r: eulergap::Result<T>) -> Result<T, (EgStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

/// Copies the last error message for this thread into `buf` (NUL-terminated,
/// truncated to `len`); returns the full message length in bytes.
///
/// # Safety
/// `buf` must point to `len` writable bytes, or be null (query mode).
#[no_mangle]
pub unsafe extern "C" fn eg_last_error(buf: *mut c_char, len: size_t) -> size_t {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn parse_text<'a>(text: *const c_char) -> Result<&'a str, (EgStatus, String)> {
    if text.is_null() {
        return Err((EgStatus::Invalid, "null text pointer".into()));
    }
    std::ffi::CStr::from_ptr(text)
        .to_str()
        .map_err(|_| (EgStatus::Invalid, "text is not valid UTF-8".into()))
}

/// Parses the edge-list text format (`digraph n m`, then `tail head weight`
/// lines) into a new graph handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eg_graph_parse(text: *const c_char, out: *mut *mut EgGraph) -> EgStatus {
    guard(|| {
        if out.is_null() {
            return Err((EgStatus::Invalid, "null output pointer".into()));
        }
        let text = parse_text(text)?;
        let g = lift(eulergap::io::parse_digraph(text))?;
        *out = Box::into_raw(Box::new(EgGraph { inner: g }));
        Ok(())
    })
}

/// # Safety
/// `g` must be a handle from `eg_graph_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eg_graph_free(g: *mut EgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn eg_graph_vertex_count(g: *const EgGraph) -> size_t {
    if g.is_null() {
        return 0;
    }
    (*g).inner.n()
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn eg_graph_edge_count(g: *const EgGraph) -> size_t {
    if g.is_null() {
        return 0;
    }
    (*g).inner.m()
}

unsafe fn mask_from(
    set: *const size_t,
    set_len: size_t,
    n: usize,
) -> Result<u64, (EgStatus, String)> {
    if set.is_null() && set_len > 0 {
        return Err((EgStatus::Invalid, "null set pointer".into()));
    }
    let mut mask = 0u64;
    for i in 0..set_len {
        let v = *set.add(i);
        if v >= n {
            return Err((EgStatus::Invalid, format!("vertex {v} out of range")));
        }
        mask |= 1 << v;
    }
    Ok(mask)
}

unsafe fn pi_from(pi: *const f64, n: usize) -> Result<Option<VertexWeights>, (EgStatus, String)> {
    if pi.is_null() {
        return Ok(None);
    }
    let slice = std::slice::from_raw_parts(pi, n);
    lift(VertexWeights::new(slice.to_vec())).map(Some)
}

/// Directed edge conductance of the subset given as a vertex id array.
///
/// # Safety
/// `g` live handle; `set` points to `set_len` vertex ids; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn eg_edge_conductance(
    g: *const EgGraph,
    set: *const size_t,
    set_len: size_t,
    out: *mut f64,
) -> EgStatus {
    guard(|| {
        let g = &(*g).inner;
        let mask = mask_from(set, set_len, g.n())?;
        *out = lift(eulergap::graph::directed_edge_conductance(g, mask))?;
        Ok(())
    })
}

/// Directed vertex expansion; `pi` may be null for uniform weights.
///
/// # Safety
/// `g` live handle; `pi` null or an array of `n` weights; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn eg_vertex_expansion(
    g: *const EgGraph,
    pi: *const f64,
    set: *const size_t,
    set_len: size_t,
    out: *mut f64,
) -> EgStatus {
    guard(|| {
        let g = &(*g).inner;
        let mask = mask_from(set, set_len, g.n())?;
        let pi = pi_from(pi, g.n())?.unwrap_or_else(|| VertexWeights::uniform(g.n()));
        *out = lift(eulergap::graph::directed_vertex_expansion(g, &pi, mask))?;
        Ok(())
    })
}

/// Exhaustive optimum cut (n <= 24); the minimizing subset is returned as a
/// bitmask over vertex ids.
///
/// # Safety
/// `g` live handle; `pi` null or length-n; out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn eg_brute_force_cut(
    g: *const EgGraph,
    mode: EgMode,
    pi: *const f64,
    out_value: *mut f64,
    out_mask: *mut u64,
) -> EgStatus {
    guard(|| {
        let g = &(*g).inner;
        let cut = match mode {
            EgMode::Edge => lift(brute_force_optimum(BruteForceInstance::Edge(g)))?,
            EgMode::Vertex => {
                let pi = pi_from(pi, g.n())?.unwrap_or_else(|| VertexWeights::uniform(g.n()));
                lift(brute_force_optimum(BruteForceInstance::Vertex(g, &pi)))?
            }
        };
        *out_value = cut.value;
        *out_mask = cut.mask();
        Ok(())
    })
}

/// Asymmetric ratio; infinity is returned as IEEE positive infinity.
///
/// # Safety
/// `g` live handle; `pi` null or length-n; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn eg_asymmetric_ratio(
    g: *const EgGraph,
    mode: EgMode,
    pi: *const f64,
    out: *mut f64,
) -> EgStatus {
    guard(|| {
        let g = &(*g).inner;
        let weights: Vec<f64> = match mode {
            EgMode::Edge => g.edges().iter().map(|e| e.weight).collect(),
            EgMode::Vertex => {
                let pi = pi_from(pi, g.n())?.unwrap_or_else(|| VertexWeights::uniform(g.n()));
                eulergap::graph::pi_induced_weights(g, &pi)
            }
        };
        *out = lift(eulergap::flow::asymmetric_ratio(g, &weights))?;
        Ok(())
    })
}

/// Certified bracket for the reweighted spectral gap. `out_converged` is 1
/// when the bracket closed within tolerance.
///
/// # Safety
/// `g` live handle; `pi` null or length-n; out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn eg_reweighted_gap(
    g: *const EgGraph,
    mode: EgMode,
    pi: *const f64,
    tol: f64,
    max_iters: size_t,
    out_lo: *mut f64,
    out_hi: *mut f64,
    out_converged: *mut c_int,
) -> EgStatus {
    guard(|| {
        let g = &(*g).inner;
        let pi = pi_from(pi, g.n())?;
        let opts = SolveOptions {
            tol,
            max_iters,
            ..Default::default()
        };
        let m = match mode {
            EgMode::Vertex => Mode::Vertex,
            EgMode::Edge => Mode::Edge,
        };
        let b = lift(max_reweighted_gap(g, m, pi.as_ref(), &opts, None))?;
        *out_lo = b.lambda_lo;
        *out_hi = b.lambda_hi;
        *out_converged = b.converged as c_int;
        Ok(())
    })
}

/// Full spectral-cut pipeline; returns the cut value, the subset bitmask,
/// and the dual objective certifying value <= 8 * xi.
///
/// # Safety
/// `g` live handle; `pi` null or length-n; out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn eg_spectral_cut(
    g: *const EgGraph,
    mode: EgMode,
    pi: *const f64,
    seed: u64,
    ensemble: size_t,
    out_value: *mut f64,
    out_mask: *mut u64,
    out_xi: *mut f64,
) -> EgStatus {
    guard(|| {
        let g = &(*g).inner;
        let pi = pi_from(pi, g.n())?;
        let m = match mode {
            EgMode::Vertex => Mode::Vertex,
            EgMode::Edge => Mode::Edge,
        };
        let opts = CutOptions {
            ensemble: ensemble.max(1),
            ..Default::default()
        };
        let res = lift(spectral_cut(g, m, pi.as_ref(), seed, &opts))?;
        *out_value = res.cut.value;
        *out_mask = res.cut.mask();
        *out_xi = res.diagnostics.xi;
        Ok(())
    })
}

/// Parses the hypergraph text format (`hypergraph n m`, then
/// `weight k v1 .. vk` lines).
///
/// # Safety
/// `text` NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn eg_hypergraph_parse(
    text: *const c_char,
    out: *mut *mut EgHypergraph,
) -> EgStatus {
    guard(|| {
        if out.is_null() {
            return Err((EgStatus::Invalid, "null output pointer".into()));
        }
        let text = parse_text(text)?;
        let h = lift(eulergap::io::parse_hypergraph(text))?;
        *out = Box::into_raw(Box::new(EgHypergraph { inner: h }));
        Ok(())
    })
}

/// # Safety
/// `h` must be a handle from `eg_hypergraph_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eg_hypergraph_free(h: *mut EgHypergraph) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Reweighted spectral gap of a hypergraph.
///
/// # Safety
/// `h` live handle; out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn eg_hypergraph_gap(
    h: *const EgHypergraph,
    tol: f64,
    max_iters: size_t,
    out_lo: *mut f64,
    out_hi: *mut f64,
    out_converged: *mut c_int,
) -> EgStatus {
    guard(|| {
        let h = &(*h).inner;
        let opts = SolveOptions {
            tol,
            max_iters,
            ..Default::default()
        };
        let b = lift(gamma2_hypergraph(h, &opts, None))?;
        *out_lo = b.lambda_lo;
        *out_hi = b.lambda_hi;
        *out_converged = b.converged as c_int;
        Ok(())
    })
}

/// Certified hypergraph conductance cut.
///
/// # Safety
/// `h` live handle; out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn eg_hypergraph_cut(
    h: *const EgHypergraph,
    seed: u64,
    ensemble: size_t,
    out_value: *mut f64,
    out_mask: *mut u64,
    out_xi: *mut f64,
) -> EgStatus {
    guard(|| {
        let h = &(*h).inner;
        let opts = CutOptions {
            ensemble: ensemble.max(1),
            ..Default::default()
        };
        let res = lift(hypergraph_cut(h, seed, &opts))?;
        *out_value = res.cut.value;
        *out_mask = res.cut.mask();
        *out_xi = res.diagnostics.xi;
        Ok(())
    })
}
