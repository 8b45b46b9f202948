//! C interface to the acy library.
//!
//! Handles are opaque and owned by the caller once returned; each has a
//! matching `_free`. Every call returns an [`AcyStatus`]; on failure the
//! message is kept per thread and read with [`acy_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use acy::algebra::GradedAlgebra;
use acy::cells::SolveOptions;
use acy::cli::{prepare, RunError};
use acy::homology::{compute_report, ComputeOptions, HomologyReport, ReportContext};

/// Result of every call. Input, math and solver failures use the same
/// numbers as the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcyStatus {
    Ok = 0,
    InvalidArgument = 1,
    Input = 2,
    Math = 3,
    Solver = 4,
    Panic = 5,
}

/// Which table of a report to read.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcyTable {
    Hochschild = 0,
    Cyclic = 1,
    Cohomology = 2,
}

/// A built algebra together with its graph and cell provenance.
pub struct AcyAlgebra {
    algebra: GradedAlgebra,
    context: ReportContext,
}

/// A finished homology report.
pub struct AcyReport {
    report: HomologyReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: AcyStatus, msg: &str) -> AcyStatus {
    set_error(msg);
    status
}

fn from_run(e: RunError) -> AcyStatus {
    let status = match e {
        RunError::Input(_) => AcyStatus::Input,
        RunError::Math(_) => AcyStatus::Math,
        RunError::Solver(_) => AcyStatus::Solver,
    };
    fail(status, &e.to_string())
}

fn guarded(f: impl FnOnce() -> AcyStatus) -> AcyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(AcyStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, AcyStatus> {
    if p.is_null() {
        return Err(fail(AcyStatus::InvalidArgument, &format!("{what} is NULL")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(AcyStatus::InvalidArgument, &format!("{what} is not UTF-8")))
}

/// Message of the last failed call on this thread; empty after success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn acy_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn acy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Build the algebra of a graph.
///
/// `graph` is a built-in name such as "A4" or "E8*", or a graph file;
/// `cells` is "builtin", "solve" or a cell/relation file (NULL means
/// "builtin").
///
/// # Safety
/// `graph` and `cells` must be NULL or NUL-terminated strings; `out` must
/// be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn acy_algebra_new(
    graph: *const c_char,
    cells: *const c_char,
    seed: u64,
    out: *mut *mut AcyAlgebra,
) -> AcyStatus {
    guarded(|| {
        if out.is_null() {
            return fail(AcyStatus::InvalidArgument, "out is NULL");
        }
        *out = ptr::null_mut();
        let graph = match text(graph, "graph") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let cells = if cells.is_null() {
            "builtin"
        } else {
            match text(cells, "cells") {
                Ok(s) => s,
                Err(s) => return s,
            }
        };
        let opts = SolveOptions { seed, ..Default::default() };
        match prepare(graph, cells, &opts) {
            Ok((algebra, context)) => {
                *out = Box::into_raw(Box::new(AcyAlgebra { algebra, context }));
                set_error("");
                AcyStatus::Ok
            }
            Err(e) => from_run(e),
        }
    })
}

/// # Safety
/// `alg` must be NULL or a handle from [`acy_algebra_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn acy_algebra_free(alg: *mut AcyAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Top degree h - 3 of the algebra.
///
/// # Safety
/// `alg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn acy_algebra_top_degree(alg: *const AcyAlgebra) -> u32 {
    alg.as_ref().map_or(0, |a| a.algebra.top() as u32)
}

/// dim A_k; zero above the top degree.
///
/// # Safety
/// `alg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn acy_algebra_dim(alg: *const AcyAlgebra, degree: u32) -> usize {
    match alg.as_ref() {
        Some(a) if degree as usize <= a.algebra.top() => a.algebra.dim(degree as usize),
        _ => 0,
    }
}

/// Compute every table and check. `cutoff_degree <= 0` selects 4h;
/// `periods == 0` selects one period (indices 0..=13).
///
/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn acy_compute(
    alg: *const AcyAlgebra,
    cutoff_degree: i64,
    periods: u32,
    out: *mut *mut AcyReport,
) -> AcyStatus {
    guarded(|| {
        if out.is_null() {
            return fail(AcyStatus::InvalidArgument, "out is NULL");
        }
        *out = ptr::null_mut();
        let Some(a) = alg.as_ref() else { return fail(AcyStatus::InvalidArgument, "algebra is NULL") };
        let opts = ComputeOptions {
            cutoff_degree: (cutoff_degree > 0).then_some(cutoff_degree),
            periods: periods.max(1) as usize,
            ..Default::default()
        };
        match compute_report(&a.algebra, &a.context, &opts) {
            Ok(report) => {
                let json = CString::new(report.to_json()).unwrap_or_default();
                *out = Box::into_raw(Box::new(AcyReport { report, json }));
                set_error("");
                AcyStatus::Ok
            }
            Err(e) => from_run(e.into()),
        }
    })
}

/// # Safety
/// `rep` must be NULL or a handle from [`acy_compute`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn acy_report_free(rep: *mut AcyReport) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Whether every check in the report passed.
///
/// # Safety
/// `rep` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn acy_report_passed(rep: *const AcyReport) -> bool {
    rep.as_ref().is_some_and(|r| r.report.passed())
}

/// Number of rows (homological indices) in a table.
///
/// # Safety
/// `rep` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn acy_report_rows(rep: *const AcyReport, table: AcyTable) -> usize {
    rep.as_ref().map_or(0, |r| rows(&r.report, table).len())
}

/// Dimension at (index, total degree), or -1 when the index is not in the
/// table.
///
/// # Safety
/// `rep` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn acy_report_dim(rep: *const AcyReport, table: AcyTable, index: usize, degree: i64) -> i64 {
    rep.as_ref().and_then(|r| rows(&r.report, table).get(index)).map_or(-1, |row| row.get(degree))
}

/// The report as "acy-report/1" JSON, owned by the handle.
///
/// # Safety
/// `rep` must be a live handle; the string dies with it.
#[no_mangle]
pub unsafe extern "C" fn acy_report_json(rep: *const AcyReport) -> *const c_char {
    rep.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

fn rows(r: &HomologyReport, table: AcyTable) -> &[acy::series::GradedDims] {
    match table {
        AcyTable::Hochschild => &r.tables.hh,
        AcyTable::Cyclic => &r.tables.hc,
        AcyTable::Cohomology => &r.tables.cohomology,
    }
}
