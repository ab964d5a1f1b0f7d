//! C interface to `cops-core`.
//!
//! Graphs cross the boundary as opaque [`CopsGraph`] handles. Every function
//! returns a [`CopsStatus`]; results go through out-pointers, which are left
//! untouched on failure. The message for the most recent failure on the
//! calling thread is available from [`cops_last_error`]. Panics are caught
//! and reported as [`CopsStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cops_core::game::{play, Outcome, Rules};
use cops_core::generators::{fixture, gen_gnp, GnpParams};
use cops_core::solver::{cop_number_exact, SolverBudget};
use cops_core::strategies::{build_cops, build_robber, cop_count_hint, StrategySpec};
use cops_core::{bounds, Error, Graph};

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    BudgetExceeded = 4,
    Io = 5,
    /// The quantity is undefined for this input, e.g. girth of a forest.
    Undefined = 6,
    Panic = 7,
}

/// How a game played through [`cops_play`] ended.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopsOutcome {
    Caught = 0,
    Evaded = 1,
    Aborted = 2,
}

/// Opaque graph handle.
pub struct CopsGraph {
    graph: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> CopsStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => CopsStatus::Parse,
        Error::BudgetExceeded(_) | Error::Saturated => CopsStatus::BudgetExceeded,
        Error::Io(_) => CopsStatus::Io,
        _ => CopsStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Core(Error),
    Undefined(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `f` behind `catch_unwind` and records any failure.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CopsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CopsStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            CopsStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Undefined(what))) => {
            set_error(what.to_string());
            CopsStatus::Undefined
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            CopsStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const CopsGraph) -> Result<&'a Graph, Failure> {
    // SAFETY: the caller passes a handle from this library or null.
    unsafe { g.as_ref() }
        .map(|h| &h.graph)
        .ok_or(Failure::Null("graph"))
}

unsafe fn out_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    // SAFETY: the caller passes a writable pointer or null.
    unsafe { p.as_mut() }.ok_or(Failure::Null(what))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null and nul-terminated per the contract.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Failure::Core(Error::InvalidParameter(format!("{what} is not UTF-8"))))
}

fn hand_out(graph: Graph, out: &mut *mut CopsGraph) {
    *out = Box::into_raw(Box::new(CopsGraph { graph }));
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cops_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn cops_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph on `n` vertices from `m` edges stored as `2m` endpoints.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (it may be null when
/// `m == 0`) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cops_graph_from_edges(
    n: usize,
    edges: *const u32,
    m: usize,
    out: *mut *mut CopsGraph,
) -> CopsStatus {
    guard(|| {
        let out = unsafe { out_mut(out, "out") }?;
        let flat: &[u32] = if m == 0 {
            &[]
        } else if edges.is_null() {
            return Err(Failure::Null("edges"));
        } else {
            // SAFETY: caller guarantees 2m readable values.
            unsafe { std::slice::from_raw_parts(edges, 2 * m) }
        };
        let pairs = flat.chunks_exact(2).map(|e| (e[0] as usize, e[1] as usize));
        hand_out(Graph::from_edges(n, pairs)?, out);
        Ok(())
    })
}

/// Parses the edge-list text format: a header `n m`, then one `u v` per line.
///
/// # Safety
/// `text` must be nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cops_graph_parse(
    text: *const c_char,
    out: *mut *mut CopsGraph,
) -> CopsStatus {
    guard(|| {
        let out = unsafe { out_mut(out, "out") }?;
        let text = unsafe { str_arg(text, "text") }?;
        hand_out(Graph::parse_text(text)?, out);
        Ok(())
    })
}

/// Loads a named fixture such as `petersen`.
///
/// # Safety
/// `name` must be nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cops_graph_fixture(
    name: *const c_char,
    out: *mut *mut CopsGraph,
) -> CopsStatus {
    guard(|| {
        let out = unsafe { out_mut(out, "out") }?;
        let name = unsafe { str_arg(name, "name") }?;
        hand_out(fixture(name)?, out);
        Ok(())
    })
}

/// Samples `G(n, p)` from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cops_graph_gnp(
    n: usize,
    p: f64,
    seed: u64,
    out: *mut *mut CopsGraph,
) -> CopsStatus {
    guard(|| {
        let out = unsafe { out_mut(out, "out") }?;
        hand_out(gen_gnp(GnpParams { n, p, seed })?, out);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cops_graph_free(g: *mut CopsGraph) {
    if !g.is_null() {
        // SAFETY: allocated by `hand_out`.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Vertex and edge counts.
///
/// # Safety
/// `g` must be a live handle; `n` and `m` writable.
#[no_mangle]
pub unsafe extern "C" fn cops_graph_size(
    g: *const CopsGraph,
    n: *mut usize,
    m: *mut usize,
) -> CopsStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let n = unsafe { out_mut(n, "n") }?;
        let m = unsafe { out_mut(m, "m") }?;
        *n = g.n();
        *m = g.m();
        Ok(())
    })
}

/// Length of a shortest cycle; [`CopsStatus::Undefined`] for forests.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cops_graph_girth(g: *const CopsGraph, out: *mut usize) -> CopsStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let out = unsafe { out_mut(out, "out") }?;
        *out = g.girth().ok_or(Failure::Undefined("graph is acyclic"))?;
        Ok(())
    })
}

/// Exact cop number, searching `k = 1..=k_max`. Budgets come from the
/// `COPS_STATE_BUDGET` and `COPS_TRANSITION_BUDGET` environment variables.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cops_cop_number(
    g: *const CopsGraph,
    k_max: usize,
    out: *mut usize,
) -> CopsStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let out = unsafe { out_mut(out, "out") }?;
        *out = cop_number_exact(g, k_max, &SolverBudget::from_env())?;
        Ok(())
    })
}

/// Minimum degree lower bound for graphs of girth at least five;
/// [`CopsStatus::Undefined`] when the girth is smaller.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cops_girth5_bound(g: *const CopsGraph, out: *mut usize) -> CopsStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let out = unsafe { out_mut(out, "out") }?;
        *out = bounds::girth5_lower_bound(g).ok_or(Failure::Undefined("girth below five"))?;
        Ok(())
    })
}

/// Lower bound on the cop number of `G(n, p)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cops_gnp_lower(n: f64, p: f64, out: *mut f64) -> CopsStatus {
    guard(|| {
        let out = unsafe { out_mut(out, "out") }?;
        *out = bounds::gnp_lower_formula(n, p)?.value;
        Ok(())
    })
}

/// Upper bound on the cop number of `G(n, p)` for `eps` in (0, 1).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cops_gnp_upper(n: f64, p: f64, eps: f64, out: *mut f64) -> CopsStatus {
    guard(|| {
        let out = unsafe { out_mut(out, "out") }?;
        *out = bounds::gnp_upper_formula(n, p, eps)?.value;
        Ok(())
    })
}

/// Plays one game between named strategies such as `"greedy:k=2"` and
/// `"walkweight"`. `max_rounds == 0` selects the default cutoff. On success
/// `outcome` and `rounds` describe the result; `rounds` is the capture round
/// or the number of rounds played.
///
/// # Safety
/// `g` must be a live handle, the strings nul-terminated, and the outputs
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cops_play(
    g: *const CopsGraph,
    cops: *const c_char,
    robber: *const c_char,
    seed: u64,
    max_rounds: usize,
    outcome: *mut CopsOutcome,
    rounds: *mut usize,
) -> CopsStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let cops = unsafe { str_arg(cops, "cops") }?;
        let robber = unsafe { str_arg(robber, "robber") }?;
        let outcome = unsafe { out_mut(outcome, "outcome") }?;
        let rounds = unsafe { out_mut(rounds, "rounds") }?;
        let budget = SolverBudget::from_env();
        let cop_spec = StrategySpec::parse(cops)?;
        let mut cop_side = build_cops(&cop_spec, g, seed, &budget)?;
        let robber_spec = StrategySpec::parse(robber)?;
        let hint = cop_count_hint(&cop_spec).unwrap_or(0);
        let mut robber_side = build_robber(&robber_spec, g, seed, hint, &budget)?;
        let mut rules = Rules::for_graph(g);
        if max_rounds > 0 {
            rules.max_rounds = max_rounds;
        }
        let t = play(g, &mut cop_side, &mut robber_side, &rules);
        (*outcome, *rounds) = match t.outcome {
            Outcome::Caught { round, .. } => (CopsOutcome::Caught, round),
            Outcome::Evaded { cutoff } => (CopsOutcome::Evaded, cutoff),
            Outcome::Aborted { round, .. } => (CopsOutcome::Aborted, round),
        };
        Ok(())
    })
}
