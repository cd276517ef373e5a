use std::ffi::{c_char, CStr, CString};
use std::ptr;

use clusterkit_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ck_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ck_last_error()).to_str().unwrap().to_owned()
}

unsafe fn build(json: &str, n: u32, k: u32) -> *mut ck_family {
    let mut f = ptr::null_mut();
    assert_eq!(ck_family_construct(c(json).as_ptr(), n, k, &mut f), ck_status::CK_OK);
    f
}

#[test]
fn construct_inspect_and_free() {
    unsafe {
        let f = build(r#"{"kind":"star","center":1}"#, 6, 3);
        assert_eq!(ck_family_size(f), 10);
        let (mut n, mut k) = (0, 0);
        assert_eq!(ck_family_params(f, &mut n, &mut k), ck_status::CK_OK);
        assert_eq!((n, k), (6, 3));
        let mut m = ptr::null_mut();
        assert_eq!(ck_family_measure(f, &mut m), ck_status::CK_OK);
        assert_eq!(take(m), "1/2");
        assert_eq!(last_error(), "");
        ck_family_free(f);

        let ob = build(r#"{"kind":"odd_bipartite"}"#, 8, 4);
        let mut m = ptr::null_mut();
        ck_family_measure(ob, &mut m);
        assert_eq!(take(m), "16/35");
        ck_family_free(ob);
        ck_family_free(ptr::null_mut());
        assert_eq!(ck_family_size(ptr::null()), 0);
    }
}

#[test]
fn text_round_trip() {
    unsafe {
        let f = build(r#"{"kind":"random","size":9,"seed":4}"#, 7, 3);
        let mut text = ptr::null_mut();
        assert_eq!(ck_family_to_text(f, &mut text), ck_status::CK_OK);
        let text = take(text);
        let mut g = ptr::null_mut();
        assert_eq!(ck_family_parse(c(&text).as_ptr(), &mut g), ck_status::CK_OK);
        let mut back = ptr::null_mut();
        ck_family_to_text(g, &mut back);
        assert_eq!(take(back), text);
        assert_eq!(ck_family_size(g), 9);
        ck_family_free(f);
        ck_family_free(g);
    }
}

#[test]
fn find_cluster_reports_witnesses() {
    unsafe {
        let full = build(r#"{"kind":"lex","rank":6}"#, 4, 2);
        let (mut found, mut w) = (false, ptr::null_mut());
        assert_eq!(
            ck_find_cluster(full, 2, 3, ck_find_mode::CK_FIND_EXHAUSTIVE as u32, &mut found, &mut w),
            ck_status::CK_OK
        );
        assert!(found);
        let doc: serde_json::Value = serde_json::from_str(&take(w)).unwrap();
        assert_eq!(doc["sets"], serde_json::json!([[1, 2], [1, 3], [2, 3]]));
        assert_eq!(doc["union_size"], 3);

        let ff = build(r#"{"kind":"frankl_furedi"}"#, 8, 2);
        let (mut found, mut w) = (true, ptr::null_mut());
        assert_eq!(
            ck_find_cluster(ff, 2, 3, ck_find_mode::CK_FIND_SIMPLEX_ONLY as u32, &mut found, &mut w),
            ck_status::CK_OK
        );
        assert!(!found && w.is_null());
        assert_eq!(ck_find_cluster(ff, 2, 3, 9, &mut found, &mut w), ck_status::CK_PARAMETER);
        assert!(last_error().contains("find mode"));
        ck_family_free(full);
        ck_family_free(ff);
    }
}

#[test]
fn solve_returns_json() {
    unsafe {
        let mut out = ptr::null_mut();
        let inst = c(r#"{"d":2,"k":2,"s":3,"n":4,"mode":"exact"}"#);
        assert_eq!(ck_solve(inst.as_ptr(), &mut out), ck_status::CK_OK);
        let r: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(r["value"], 4);
        assert_eq!(r["star_is_max"], false);
        assert_eq!(r["exact"], true);

        let inst = c(r#"{"d":2,"k":3,"s":6,"n":6,"mode":"verify_star","check_uniqueness":true}"#);
        assert_eq!(ck_solve(inst.as_ptr(), &mut out), ck_status::CK_OK);
        let r: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(r["value"], 10);
        assert_eq!(r["uniqueness"]["all_maxima_are_stars"], true);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(ck_family_parse(c("3 2\n1 2\n1 9\n").as_ptr(), &mut f), ck_status::CK_PARSE);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(ck_family_parse(ptr::null(), &mut f), ck_status::CK_NULL_POINTER);
        assert_eq!(
            ck_family_construct(c(r#"{"kind":"star","center":9}"#).as_ptr(), 6, 3, &mut f),
            ck_status::CK_PARAMETER
        );
        assert_eq!(ck_family_construct(c("{").as_ptr(), 6, 3, &mut f), ck_status::CK_PARSE);
        let bad = [0xffu8, 0];
        assert_eq!(ck_family_parse(bad.as_ptr().cast(), &mut f), ck_status::CK_INVALID_UTF8);
        let mut out = ptr::null_mut();
        let too_big = c(r#"{"d":2,"k":3,"s":6,"n":11,"mode":"exact"}"#);
        assert_eq!(ck_solve(too_big.as_ptr(), &mut out), ck_status::CK_PARAMETER);
        assert_eq!(ck_family_size(f), 0);
        assert_eq!(ck_family_to_text(ptr::null(), &mut out), ck_status::CK_NULL_POINTER);
    }
}

#[test]
fn header_declares_the_abi() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/clusterkit.h")).unwrap();
    for name in [
        "ck_status",
        "ck_find_mode",
        "typedef struct ck_family ck_family",
        "ck_family_construct",
        "ck_family_parse",
        "ck_family_free",
        "ck_family_size",
        "ck_family_to_text",
        "ck_find_cluster",
        "ck_solve",
        "ck_string_free",
        "ck_last_error",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
