use std::ffi::{CStr, CString};
use std::ptr;

use acy_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(acy_last_error()) }.to_string_lossy().into_owned()
}

fn algebra(name: &str) -> *mut AcyAlgebra {
    let g = CString::new(name).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { acy_algebra_new(g.as_ptr(), ptr::null(), 1, &mut out) };
    assert_eq!(status, AcyStatus::Ok, "{}", last_error());
    out
}

#[test]
fn a4_report_through_handles() {
    let a = algebra("A4");
    unsafe {
        assert_eq!(acy_algebra_top_degree(a), 1);
        assert_eq!(acy_algebra_dim(a, 0), 3);
        assert_eq!(acy_algebra_dim(a, 1), 3);
        assert_eq!(acy_algebra_dim(a, 2), 0);
        let mut r = ptr::null_mut();
        assert_eq!(acy_compute(a, 0, 0, &mut r), AcyStatus::Ok);
        assert!(acy_report_passed(r));
        assert_eq!(acy_report_rows(r, AcyTable::Hochschild), 14);
        assert_eq!(acy_report_dim(r, AcyTable::Hochschild, 2, 3), 1);
        assert_eq!(acy_report_dim(r, AcyTable::Cyclic, 3, 3), 0);
        assert_eq!(acy_report_dim(r, AcyTable::Cohomology, 0, 0), 1);
        assert_eq!(acy_report_dim(r, AcyTable::Hochschild, 99, 0), -1);
        let json = CStr::from_ptr(acy_report_json(r)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["schema"], "acy-report/1");
        acy_report_free(r);
        acy_algebra_free(a);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut out = ptr::null_mut();
    let bad = CString::new("E4(12)").unwrap();
    assert_eq!(unsafe { acy_algebra_new(bad.as_ptr(), ptr::null(), 1, &mut out) }, AcyStatus::Input);
    assert!(out.is_null());
    assert!(last_error().contains("not supported"));

    assert_eq!(unsafe { acy_algebra_new(ptr::null(), ptr::null(), 1, &mut out) }, AcyStatus::InvalidArgument);
    let g = CString::new("A4").unwrap();
    assert_eq!(unsafe { acy_algebra_new(g.as_ptr(), ptr::null(), 1, ptr::null_mut()) }, AcyStatus::InvalidArgument);

    let a = algebra("A5*");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { acy_compute(a, 3, 1, &mut r) }, AcyStatus::Input);
    assert!(r.is_null());
    assert!(last_error().contains("cutoff"));
    unsafe { acy_algebra_free(a) };
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        acy_algebra_free(ptr::null_mut());
        acy_report_free(ptr::null_mut());
        assert_eq!(acy_algebra_dim(ptr::null(), 0), 0);
        assert!(!acy_report_passed(ptr::null()));
        assert!(acy_report_json(ptr::null()).is_null());
    }
    let v = unsafe { CStr::from_ptr(acy_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/acy.h")).unwrap();
    for name in [
        "acy_last_error",
        "acy_version",
        "acy_algebra_new",
        "acy_algebra_free",
        "acy_algebra_dim",
        "acy_algebra_top_degree",
        "acy_compute",
        "acy_report_free",
        "acy_report_passed",
        "acy_report_rows",
        "acy_report_dim",
        "acy_report_json",
        "ACY_STATUS_SOLVER = 4",
        "typedef struct AcyReport AcyReport",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
