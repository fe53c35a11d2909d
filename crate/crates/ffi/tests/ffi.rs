use std::ffi::{c_char, c_int, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use filtk_ffi::*;

fn fixture(name: &str) -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    let text = std::fs::read_to_string(p).unwrap();
    CString::new(text).unwrap()
}

fn last_error() -> String {
    let p = filtk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { filtk_string_free(p) };
    s
}

fn load_module(name: &str) -> *mut FiltkModule {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { filtk_module_from_json(fixture(name).as_ptr(), &mut m) }, FiltkStatus::Ok);
    m
}

#[test]
fn spaces() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { filtk_space_from_json(fixture("diamond.json").as_ptr(), &mut s) }, FiltkStatus::Ok);
    assert_eq!(unsafe { filtk_space_len(s) }, 4);
    let (mut flags, mut lc) = (0u32, 0usize);
    assert_eq!(unsafe { filtk_space_classify(s, &mut flags, &mut lc) }, FiltkStatus::Ok);
    assert_eq!(flags & FILTK_UNIQUE_PATH, 0);
    assert_eq!(lc, 13);
    unsafe { filtk_space_free(s) };

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { filtk_space_from_json(fixture("chain4.json").as_ptr(), &mut s) }, FiltkStatus::Ok);
    assert_eq!(unsafe { filtk_space_classify(s, &mut flags, ptr::null_mut()) }, FiltkStatus::Ok);
    assert_eq!(flags, FILTK_UNIQUE_PATH | FILTK_EBP | FILTK_ACCORDION | FILTK_FOREST);
    unsafe { filtk_space_free(s) };
}

#[test]
fn errors_carry_messages() {
    let mut s = ptr::null_mut();
    let bad = CString::new("{\"points\": [\"a\", \"a\"], \"covers\": []}").unwrap();
    assert_eq!(unsafe { filtk_space_from_json(bad.as_ptr(), &mut s) }, FiltkStatus::InvalidInput);
    assert!(s.is_null());
    assert!(last_error().contains("duplicate point"));
    assert_eq!(unsafe { filtk_space_from_json(ptr::null(), &mut s) }, FiltkStatus::NullPointer);
    assert_eq!(unsafe { filtk_space_classify(ptr::null(), ptr::null_mut(), ptr::null_mut()) }, FiltkStatus::NullPointer);
    let mut m = ptr::null_mut();
    let junk = CString::new("{ nope").unwrap();
    assert_eq!(unsafe { filtk_module_from_json(junk.as_ptr(), &mut m) }, FiltkStatus::InvalidInput);
    // a successful call clears the message
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { filtk_space_from_json(fixture("one_point.json").as_ptr(), &mut s) }, FiltkStatus::Ok);
    assert!(filtk_last_error().is_null());
    unsafe {
        filtk_space_free(s);
        filtk_space_free(ptr::null_mut());
        filtk_module_free(ptr::null_mut());
        filtk_string_free(ptr::null_mut());
    }
}

#[test]
fn checks() {
    let m = load_module("sierpinski_extension_st.json");
    let (mut v, mut e, mut r): (c_int, c_int, c_int) = (0, 0, 0);
    assert_eq!(unsafe { filtk_module_check(m, &mut v, &mut e, &mut r) }, FiltkStatus::Ok);
    assert_eq!((v, e, r), (1, 1, 1));
    unsafe { filtk_module_free(m) };

    let m = load_module("chain3_extension_perturbed_delta_st.json");
    assert_eq!(unsafe { filtk_module_check(m, &mut v, ptr::null_mut(), ptr::null_mut()) }, FiltkStatus::Ok);
    assert_eq!(v, 0);
    unsafe { filtk_module_free(m) };
}

#[test]
fn extend_and_restrict() {
    let b = load_module("sierpinski_extension_b.json");
    let mut st = ptr::null_mut();
    assert_eq!(unsafe { filtk_module_extend(b, &mut st) }, FiltkStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { filtk_module_restrict(st, 1, &mut back) }, FiltkStatus::Ok);
    let (mut a, mut c) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { filtk_module_to_json(b, &mut a) }, FiltkStatus::Ok);
    assert_eq!(unsafe { filtk_module_to_json(back, &mut c) }, FiltkStatus::Ok);
    let (a, c): (serde_json::Value, serde_json::Value) =
        (serde_json::from_str(&take_string(a)).unwrap(), serde_json::from_str(&take_string(c)).unwrap());
    assert_eq!(a["groups"], c["groups"]);
    assert_eq!(a["maps"], c["maps"]);

    // extend wants a B-module
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { filtk_module_extend(st, &mut out) }, FiltkStatus::InvalidInput);
    assert_eq!(unsafe { filtk_module_restrict(st, 9, &mut out) }, FiltkStatus::InvalidInput);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { filtk_module_rebuild(st, &mut again) }, FiltkStatus::Ok);
    unsafe {
        filtk_module_free(b);
        filtk_module_free(st);
        filtk_module_free(back);
        filtk_module_free(again);
    }
}

#[test]
fn classification() {
    let m = load_module("one_point_z2_z2_pointed_st.json");
    let mut ok: c_int = 0;
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { filtk_module_phantom(m, &mut ok, &mut json) }, FiltkStatus::Ok);
    assert_eq!(ok, 1);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["phantom_criteria"], true);
    assert_eq!(unsafe { filtk_module_range_check(m, 0, &mut ok, ptr::null_mut()) }, FiltkStatus::Ok);
    assert_eq!(ok, 1);
    unsafe { filtk_module_free(m) };

    let r = load_module("sierpinski_extension_r.json");
    assert_eq!(unsafe { filtk_module_range_check(r, 1, &mut ok, ptr::null_mut()) }, FiltkStatus::Ok);
    unsafe { filtk_module_free(r) };

    let m = load_module("chain3_point_1_odd_z2_st.json");
    assert_eq!(unsafe { filtk_module_phantom(m, &mut ok, ptr::null_mut()) }, FiltkStatus::Ok);
    assert_eq!(ok, 0);
    unsafe { filtk_module_free(m) };
}

#[test]
fn phantom_off_accordions_is_a_precondition_error() {
    let space = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/pseudocircle.json")).unwrap();
    let space: serde_json::Value = serde_json::from_str(&space).unwrap();
    let mut groups = serde_json::Map::new();
    let s = filtk::catalog::pseudocircle();
    for lc in s.enumerate_lc() {
        for p in 0..2 {
            groups.insert(format!("lc:{}:{p}", s.join_names(lc.set)), serde_json::json!({"gens": 0}));
        }
    }
    let doc = serde_json::json!({"space": space, "kind": "st", "groups": groups});
    let text = CString::new(doc.to_string()).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { filtk_module_from_json(text.as_ptr(), &mut m) }, FiltkStatus::Ok, "{}", last_error());
    let mut ok: c_int = 1;
    assert_eq!(unsafe { filtk_module_phantom(m, &mut ok, ptr::null_mut()) }, FiltkStatus::Precondition);
    assert!(last_error().contains("not applicable"));
    unsafe { filtk_module_free(m) };
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(filtk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/filtk.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["filtk_space_from_json", "filtk_module_phantom", "FILTK_STATUS_PRECONDITION"] {
        assert!(text.contains(f), "{f} missing from the header");
    }
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).output() else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
