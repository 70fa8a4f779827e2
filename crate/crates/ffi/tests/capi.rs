use std::ffi::{CStr, CString};
use std::ptr;

use projcong_ffi::*;
use serde_json::Value;

const CUBE: &str = r#"{"dim":3,"vertices":[[-1,-1,-1],[1,-1,-1],[-1,1,-1],[1,1,-1],[-1,-1,1],[1,-1,1],[-1,1,1],[1,1,1]]}"#;
const BOX: &str = r#"{"dim":3,"vertices":[[-1,-1,-1],[3,-1,-1],[-1,1,-1],[3,1,-1],[-1,-1,1],[3,-1,1],[-1,1,1],[3,1,1]]}"#;

fn load(json: &str) -> *mut PcPolytope {
    let c = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pc_polytope_from_json(c.as_ptr(), 0.0, &mut out) }, PcStatus::Ok);
    assert!(!out.is_null());
    out
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { pc_string_free(s) };
    text
}

fn last_error() -> String {
    let e = pc_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned()
}

#[test]
fn load_and_count() {
    let p = load(CUBE);
    let mut n = 0usize;
    assert_eq!(unsafe { pc_polytope_vertex_count(p, &mut n) }, PcStatus::Ok);
    assert_eq!(n, 8);
    unsafe { pc_polytope_free(p) };
}

#[test]
fn decide_translate() {
    let p = load(BOX);
    let q = load(r#"{"dim":3,"vertices":[[0,0,0],[4,0,0],[0,2,0],[4,2,0],[0,0,2],[4,0,2],[0,2,2],[4,2,2]]}"#);
    let mut out = ptr::null_mut();
    let st = unsafe { pc_decide(p, q, PcMode::Projections, 4, 7, 1, &mut out) };
    assert_eq!(st, PcStatus::Ok);
    let report: Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(report["schema_version"], 1);
    let kind = report["verdict"]["kind"].as_str().unwrap();
    assert!(kind == "translate" || kind == "reflect_translate", "{kind}");
    unsafe {
        pc_polytope_free(p);
        pc_polytope_free(q);
    }
}

#[test]
fn planar_body_json() {
    let p = load(CUBE);
    let xi = CString::new("0,0,1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pc_planar_body(p, xi.as_ptr(), PcMode::Sections, &mut out) }, PcStatus::Ok);
    let body: Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(body["vertices2d"].as_array().unwrap().len(), 4);

    let bad = CString::new("0,0,0").unwrap();
    let st = unsafe { pc_planar_body(p, bad.as_ptr(), PcMode::Projections, &mut out) };
    assert_eq!(st, PcStatus::Precondition);
    assert!(last_error().contains("nonzero"));
    unsafe { pc_polytope_free(p) };
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let flat = CString::new(r#"{"dim":3,"vertices":[[0,0,0],[1,0,0],[0,1,0]]}"#).unwrap();
    assert_eq!(unsafe { pc_polytope_from_json(flat.as_ptr(), 0.0, &mut out) }, PcStatus::InvalidInput);
    assert!(last_error().contains("span"));

    let floats = CString::new(r#"{"dim":3,"vertices":[[0.5,0,0],[1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
    assert_eq!(unsafe { pc_polytope_from_json(floats.as_ptr(), 0.0, &mut out) }, PcStatus::InvalidInput);
    assert_eq!(unsafe { pc_polytope_from_json(floats.as_ptr(), 1e-9, &mut out) }, PcStatus::Ok);
    unsafe { pc_polytope_free(out) };

    assert_eq!(unsafe { pc_polytope_from_json(ptr::null(), 0.0, &mut out) }, PcStatus::NullPointer);
    let mut n = 0usize;
    assert_eq!(unsafe { pc_polytope_vertex_count(ptr::null(), &mut n) }, PcStatus::NullPointer);
    unsafe {
        pc_polytope_free(ptr::null_mut());
        pc_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/projcong.h")).unwrap();
    for sym in ["pc_polytope_from_json", "pc_decide", "pc_last_error", "typedef struct PcPolytope PcPolytope"] {
        assert!(header.contains(sym), "{sym}");
    }
}
