//! C ABI over the graphbrauer analyzer.
//!
//! Graphs and reports are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`GbStatus`]; on failure the
//! message is available from [`gb_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use graphbrauer::bounds::{analyze, AnalysisError, BoundsReport, DivisorInterval};
use graphbrauer::config::Config;
use graphbrauer::multigraph::{builtin, parse_graph, GraphError, Multigraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbStatus {
    Ok = 0,
    NullPointer = -1,
    InvalidUtf8 = -2,
    InvalidGraph = -3,
    UnknownName = -4,
    InvalidConfig = -5,
    NoBound = -6,
    Internal = -7,
}

/// Opaque graph handle.
pub struct GbGraph(Multigraph);

/// Opaque report handle.
pub struct GbReport(BoundsReport);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbConfig {
    pub enum_cap: u64,
    pub bar_cap: u64,
    pub union_cap: u64,
    pub subgraph_depth: u32,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbInterval {
    pub lower: u64,
    pub upper: u64,
    pub resolved: bool,
}

impl From<DivisorInterval> for GbInterval {
    fn from(i: DivisorInterval) -> Self {
        GbInterval { lower: i.lower, upper: i.upper, resolved: i.resolved }
    }
}

impl From<&GbConfig> for Config {
    fn from(c: &GbConfig) -> Self {
        Config {
            enum_cap: c.enum_cap,
            bar_cap: c.bar_cap,
            union_cap: c.union_cap,
            subgraph_depth: c.subgraph_depth,
            seed: c.seed,
            ..Config::default()
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: GbStatus, msg: impl Into<String>) -> GbStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning a panic into `Internal`.
fn guard(f: impl FnOnce() -> GbStatus) -> GbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(GbStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, GbStatus> {
    if s.is_null() {
        return Err(fail(GbStatus::NullPointer, "null string argument"));
    }
    // SAFETY: the caller passes a nul-terminated string.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| fail(GbStatus::InvalidUtf8, "string is not UTF-8"))
}

fn graph_status(e: &GraphError) -> GbStatus {
    match e {
        GraphError::UnknownName(_) => GbStatus::UnknownName,
        _ => GbStatus::InvalidGraph,
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Default caps.
///
/// # Safety
/// `out` must be null or point to writable memory for a `GbConfig`.
#[no_mangle]
pub unsafe extern "C" fn gb_config_default(out: *mut GbConfig) -> GbStatus {
    if out.is_null() {
        return fail(GbStatus::NullPointer, "null output pointer");
    }
    let c = Config::default();
    let value = GbConfig {
        enum_cap: c.enum_cap,
        bar_cap: c.bar_cap,
        union_cap: c.union_cap,
        subgraph_depth: c.subgraph_depth,
        seed: c.seed,
    };
    // SAFETY: checked non-null; caller guarantees writability.
    unsafe { out.write(value) };
    GbStatus::Ok
}

/// Parses a graph document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gb_graph_from_json(json: *const c_char, out: *mut *mut GbGraph) -> GbStatus {
    guard(|| {
        if out.is_null() {
            return fail(GbStatus::NullPointer, "null output pointer");
        }
        // SAFETY: forwarded caller contract.
        let text = match unsafe { read_str(json) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_graph(text) {
            Ok(g) => {
                // SAFETY: checked non-null.
                unsafe { out.write(Box::into_raw(Box::new(GbGraph(g)))) };
                GbStatus::Ok
            }
            Err(e) => fail(graph_status(&e), e.to_string()),
        }
    })
}

/// One of the built-in graphs by name.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gb_graph_builtin(name: *const c_char, out: *mut *mut GbGraph) -> GbStatus {
    guard(|| {
        if out.is_null() {
            return fail(GbStatus::NullPointer, "null output pointer");
        }
        // SAFETY: forwarded caller contract.
        let name = match unsafe { read_str(name) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        match builtin(name) {
            Ok(g) => {
                // SAFETY: checked non-null.
                unsafe { out.write(Box::into_raw(Box::new(GbGraph(g)))) };
                GbStatus::Ok
            }
            Err(e) => fail(graph_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gb_graph_genus(graph: *const GbGraph, out: *mut u64) -> GbStatus {
    if graph.is_null() || out.is_null() {
        return fail(GbStatus::NullPointer, "null argument");
    }
    // SAFETY: live handle and writable output per the caller contract.
    unsafe { out.write((*graph).0.genus() as u64) };
    GbStatus::Ok
}

/// # Safety
/// `graph` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gb_graph_free(graph: *mut GbGraph) {
    if !graph.is_null() {
        // SAFETY: the handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Runs the full analysis. `config` may be null for the defaults.
///
/// # Safety
/// `graph` must be a live handle, `config` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gb_analyze(graph: *const GbGraph, config: *const GbConfig, out: *mut *mut GbReport) -> GbStatus {
    guard(|| {
        if graph.is_null() || out.is_null() {
            return fail(GbStatus::NullPointer, "null argument");
        }
        let config = if config.is_null() {
            Config::default()
        } else {
            // SAFETY: non-null and valid per the caller contract.
            Config::from(unsafe { &*config })
        };
        if let Err(e) = config.validate() {
            return fail(GbStatus::InvalidConfig, e.to_string());
        }
        // SAFETY: live handle.
        let g = unsafe { &(*graph).0 };
        match analyze(g, &config) {
            Ok(r) => {
                // SAFETY: checked non-null.
                unsafe { out.write(Box::into_raw(Box::new(GbReport(r)))) };
                GbStatus::Ok
            }
            Err(e @ AnalysisError::ResourceCap { .. }) => fail(GbStatus::NoBound, e.to_string()),
            Err(e @ AnalysisError::Config(_)) => fail(GbStatus::InvalidConfig, e.to_string()),
            Err(e) => fail(GbStatus::Internal, e.to_string()),
        }
    })
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gb_report_period(report: *const GbReport, out: *mut GbInterval) -> GbStatus {
    if report.is_null() || out.is_null() {
        return fail(GbStatus::NullPointer, "null argument");
    }
    // SAFETY: caller contract.
    unsafe { out.write((*report).0.period.into()) };
    GbStatus::Ok
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gb_report_index(report: *const GbReport, out: *mut GbInterval) -> GbStatus {
    if report.is_null() || out.is_null() {
        return fail(GbStatus::NullPointer, "null argument");
    }
    // SAFETY: caller contract.
    unsafe { out.write((*report).0.index.into()) };
    GbStatus::Ok
}

/// The report as JSON. Release the string with [`gb_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gb_report_to_json(report: *const GbReport, out: *mut *mut c_char) -> GbStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(GbStatus::NullPointer, "null argument");
        }
        // SAFETY: live handle.
        let json = unsafe { (*report).0.to_json() };
        let s = CString::new(json).expect("JSON has no nul bytes");
        // SAFETY: checked non-null.
        unsafe { out.write(s.into_raw()) };
        GbStatus::Ok
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gb_report_free(report: *mut GbReport) {
    if !report.is_null() {
        // SAFETY: the handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(report) });
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gb_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the string came from CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}
