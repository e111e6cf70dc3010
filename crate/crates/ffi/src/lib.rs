//! C ABI over `trimcolor`.
//!
//! Graphs live behind the opaque `TcGraph` handle. Every fallible call
//! returns a `TcStatus`; on failure the message is retrievable through
//! `tc_last_error` on the same thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use trimcolor::harness::{self, ColorAlgorithm, ColorOptions, DecideAlgorithm, ListAlgorithm, Verdict};
use trimcolor::{Error, Graph, Limits, ListAssignment};

/// Opaque graph handle; create with `tc_graph_new` or `tc_graph_from_dimacs`,
/// release with `tc_graph_free`.
pub struct TcGraph {
    graph: Graph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Contract = 4,
    Resource = 5,
    Budget = 6,
    Internal = 7,
    Io = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcDecideAlgorithm {
    Bhk = 0,
    Trimmed = 1,
    Bounded = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcColorAlgorithm {
    Bhk = 0,
    Trimmed = 1,
    Reduction = 2,
    A3 = 3,
}

/// Pass as `delta` to use the library default.
pub const TC_DEFAULT_DELTA: usize = 0;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

fn status_of(e: &Error) -> TcStatus {
    match e {
        Error::Parse { .. } => TcStatus::Parse,
        Error::Contract(_) => TcStatus::Contract,
        Error::Resource(_) => TcStatus::Resource,
        Error::Budget(_) => TcStatus::Budget,
        Error::InternalContradiction(_) => TcStatus::Internal,
        Error::Io(_) => TcStatus::Io,
    }
}

/// Runs `f`, mapping errors and panics to a status and the thread's message.
fn guard(f: impl FnOnce() -> Result<(), (TcStatus, String)>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TcStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside trimcolor");
            TcStatus::Panic
        }
    }
}

fn lib(e: Error) -> (TcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TcStatus, String) {
    (TcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn graph_ref<'a>(g: *const TcGraph) -> Result<&'a Graph, (TcStatus, String)> {
    g.as_ref().map(|h| &h.graph).ok_or_else(|| null("graph"))
}

fn delta_opt(delta: usize) -> Option<usize> {
    (delta != TC_DEFAULT_DELTA).then_some(delta)
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next `tc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Edgeless graph on `n` vertices.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_new(n: usize, out: *mut *mut TcGraph) -> TcStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let graph = Graph::from_edges(n, &[]).map_err(lib)?;
        *out = Box::into_raw(Box::new(TcGraph { graph }));
        Ok(())
    })
}

/// Parses DIMACS `.col` text.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_from_dimacs(text: *const c_char, out: *mut *mut TcGraph) -> TcStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (TcStatus::InvalidUtf8, e.to_string()))?;
        let graph = trimcolor::graph::load_dimacs(text).map_err(lib)?;
        *out = Box::into_raw(Box::new(TcGraph { graph }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_free(g: *mut TcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Adds the undirected edge `{u, v}`; 0-based, no loops.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_add_edge(g: *mut TcGraph, u: usize, v: usize) -> TcStatus {
    guard(|| {
        let h = g.as_mut().ok_or_else(|| null("graph"))?;
        let n = h.graph.n();
        if u >= n || v >= n || u == v {
            return Err((TcStatus::Contract, format!("edge ({u}, {v}) invalid for n={n}")));
        }
        h.graph = h.graph.with_edge(u, v);
        Ok(())
    })
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_vertex_count(g: *const TcGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.n())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_edge_count(g: *const TcGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.edge_count())
}

/// Decides k-colorability; `delta` of `TC_DEFAULT_DELTA` picks the default.
///
/// # Safety
/// `g` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tc_decide(
    g: *const TcGraph,
    k: usize,
    algorithm: TcDecideAlgorithm,
    delta: usize,
    out: *mut bool,
) -> TcStatus {
    guard(|| {
        let graph = graph_ref(g)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let alg = match algorithm {
            TcDecideAlgorithm::Bhk => DecideAlgorithm::Bhk,
            TcDecideAlgorithm::Trimmed => DecideAlgorithm::Trimmed,
            TcDecideAlgorithm::Bounded => DecideAlgorithm::Bounded,
        };
        let report = harness::decide(graph, k, alg, delta_opt(delta), &Limits::from_env()).map_err(lib)?;
        *out = report.verdict == Verdict::Colorable;
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tc_chromatic_number(g: *const TcGraph, out: *mut usize) -> TcStatus {
    guard(|| {
        let graph = graph_ref(g)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = trimcolor::bhk::chromatic_number(graph, &Limits::from_env()).map_err(lib)?;
        Ok(())
    })
}

/// Searches for a proper k-coloring. On success `*found` says whether one
/// exists; if so, `colors[0..n)` holds it. `seed` only affects `A3`.
///
/// # Safety
/// `g` must be a live handle, `found` valid for one write, and `colors`
/// valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn tc_color(
    g: *const TcGraph,
    k: usize,
    algorithm: TcColorAlgorithm,
    seed: u64,
    colors: *mut u32,
    len: usize,
    found: *mut bool,
) -> TcStatus {
    guard(|| {
        let graph = graph_ref(g)?;
        let found = found.as_mut().ok_or_else(|| null("found"))?;
        if colors.is_null() && graph.n() > 0 {
            return Err(null("colors"));
        }
        if len < graph.n() {
            return Err((TcStatus::BufferTooSmall, format!("need {} slots, got {len}", graph.n())));
        }
        let alg = match algorithm {
            TcColorAlgorithm::Bhk => ColorAlgorithm::Bhk,
            TcColorAlgorithm::Trimmed => ColorAlgorithm::Trimmed,
            TcColorAlgorithm::Reduction => ColorAlgorithm::Reduction,
            TcColorAlgorithm::A3 => ColorAlgorithm::A3,
        };
        let opts = ColorOptions {
            seed: Some(seed),
            ..ColorOptions::default()
        };
        let report = harness::color(graph, k, alg, &opts, &Limits::from_env()).map_err(lib)?;
        *found = report.coloring.is_some();
        if let Some(c) = report.coloring {
            std::slice::from_raw_parts_mut(colors, c.len()).copy_from_slice(&c);
        }
        Ok(())
    })
}

/// List coloring. Vertex `v` may use `palette[offsets[v]..offsets[v+1])`,
/// so `offsets` has `n + 1` entries.
///
/// # Safety
/// `g` must be a live handle; `offsets` must hold `n + 1` entries and
/// `palette` at least `offsets[n]`; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tc_list_color(
    g: *const TcGraph,
    offsets: *const usize,
    palette: *const u32,
    out: *mut bool,
) -> TcStatus {
    guard(|| {
        let graph = graph_ref(g)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if offsets.is_null() {
            return Err(null("offsets"));
        }
        let offsets = std::slice::from_raw_parts(offsets, graph.n() + 1);
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err((TcStatus::Contract, "offsets must be nondecreasing".into()));
        }
        let total = offsets[graph.n()];
        if palette.is_null() && total > 0 {
            return Err(null("palette"));
        }
        let palette = if total == 0 { &[][..] } else { std::slice::from_raw_parts(palette, total) };
        let lists = offsets.windows(2).map(|w| palette[w[0]..w[1]].to_vec()).collect();
        let lists = ListAssignment::from_lists(lists);
        let report = harness::listcolor(graph, &lists, None, ListAlgorithm::Backtracking, None, &Limits::from_env())
            .map_err(lib)?;
        *out = report.verdict == Verdict::Colorable;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message() -> String {
        unsafe { CStr::from_ptr(tc_last_error()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn panics_become_status() {
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let st = guard(|| panic!("boom"));
        std::panic::set_hook(prev);
        assert_eq!(st, TcStatus::Panic);
        assert!(message().contains("panic"));
    }

    #[test]
    fn statuses_follow_error_kinds() {
        assert_eq!(status_of(&Error::Resource(String::new())), TcStatus::Resource);
        assert_eq!(status_of(&Error::Parse { line: 1, message: String::new() }), TcStatus::Parse);
        assert_eq!(guard(|| Err(lib(Error::Budget("x\0y".into())))), TcStatus::Budget);
        assert_eq!(message(), "oracle budget exceeded: x y");
        assert_eq!(guard(|| Ok(())), TcStatus::Ok);
        assert!(message().is_empty());
    }

    #[test]
    fn version_is_terminated() {
        let v = unsafe { CStr::from_ptr(tc_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
