use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use crdu_ffi::*;

const MODEL: &str = r#"{
  "schema_version": 1,
  "kind": "crdu",
  "states": ["s1", "s2", "s3"],
  "reference": {"s1": 0.3, "s2": 0.3, "s3": 0.4},
  "capacity": {
    "s1": 0.4, "s2": 0.0, "s3": 0.0,
    "s1,s2": 0.5, "s1,s3": 0.6, "s2,s3": 0.5
  },
  "distortion": {"type": "identity"},
  "utility": {"type": "identity"}
}"#;

fn last_error() -> String {
    let p = crdu_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn model() -> *mut CrduModel {
    let json = CString::new(MODEL).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { crdu_model_from_json(json.as_ptr(), &mut m) },
        CrduStatus::Ok
    );
    assert!(!m.is_null());
    m
}

#[test]
fn value_and_certainty_equivalent() {
    let m = model();
    let mut n = 0usize;
    unsafe {
        assert_eq!(crdu_model_state_count(m, &mut n), CrduStatus::Ok);
        assert_eq!(n, 3);
        let x = [2.0, 1.0, 0.0];
        let mut v = f64::NAN;
        assert_eq!(crdu_model_value(m, x.as_ptr(), 3, &mut v), CrduStatus::Ok);
        // 2·0.4 + 1·(0.5 − 0.4) + 0
        assert!((v - 0.9).abs() < 1e-12);
        let mut ce = f64::NAN;
        assert_eq!(
            crdu_model_certainty_equivalent(m, x.as_ptr(), 3, &mut ce),
            CrduStatus::Ok
        );
        assert!((ce - 0.9).abs() < 1e-12);
        crdu_model_free(m);
    }
}

#[test]
fn matching_probability_round_trips() {
    let m = model();
    let mut p = f64::NAN;
    unsafe {
        assert_eq!(
            crdu_model_matching_probability(m, 0b101, &mut p),
            CrduStatus::Ok
        );
        assert!((p - 0.6).abs() < 1e-9);
        assert_eq!(
            crdu_model_matching_probability(m, 0b1000, &mut p),
            CrduStatus::InvalidArgument
        );
        crdu_model_free(m);
    }
}

#[test]
fn robust_value_and_checks() {
    let m = model();
    unsafe {
        let x = [2.0, 1.0, 0.0];
        let (mut v, mut exact) = (f64::NAN, true);
        assert_eq!(
            crdu_model_robust_value(m, x.as_ptr(), 3, &mut v, &mut exact),
            CrduStatus::Ok
        );
        assert!((v - 0.9).abs() < 1e-9);
        let mut holds = true;
        let prop = CString::new("supermodular").unwrap();
        assert_eq!(
            crdu_model_check(m, prop.as_ptr(), &mut holds),
            CrduStatus::Ok
        );
        assert!(!holds);
        let prop = CString::new("balanced").unwrap();
        assert_eq!(
            crdu_model_check(m, prop.as_ptr(), &mut holds),
            CrduStatus::Ok
        );
        assert!(holds);
        let prop = CString::new("nonsense").unwrap();
        assert_eq!(
            crdu_model_check(m, prop.as_ptr(), &mut holds),
            CrduStatus::NotFound
        );
        assert!(last_error().contains("unknown property"));
        crdu_model_free(m);
    }
}

#[test]
fn errors_are_reported() {
    let mut m = ptr::null_mut();
    let bad = CString::new("{\"kind\": ").unwrap();
    unsafe {
        assert_eq!(
            crdu_model_from_json(bad.as_ptr(), &mut m),
            CrduStatus::Parse
        );
        assert!(m.is_null());
        assert!(last_error().starts_with("<memory>:"));
        assert_eq!(
            crdu_model_from_json(ptr::null(), &mut m),
            CrduStatus::NullPointer
        );
        let model = model();
        assert!(crdu_last_error().is_null());
        let x = [1.0, 2.0];
        let mut v = 0.0;
        assert_eq!(
            crdu_model_value(model, x.as_ptr(), 2, &mut v),
            CrduStatus::InvalidArgument
        );
        assert_eq!(
            crdu_model_value(model, x.as_ptr(), 3, ptr::null_mut()),
            CrduStatus::NullPointer
        );
        assert_eq!(
            crdu_model_value(ptr::null(), x.as_ptr(), 3, &mut v),
            CrduStatus::NullPointer
        );
        crdu_model_free(model);
        crdu_model_free(ptr::null_mut());
    }
}

#[test]
fn load_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, MODEL).unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(crdu_model_load(c.as_ptr(), &mut m), CrduStatus::Ok);
        crdu_model_free(m);
        let missing = CString::new(dir.path().join("nope.json").to_str().unwrap()).unwrap();
        assert_eq!(crdu_model_load(missing.as_ptr(), &mut m), CrduStatus::Parse);
    }
}

#[test]
fn verify_suite() {
    let suite = CString::new("latt").unwrap();
    let mut passed = 0;
    unsafe {
        assert_eq!(
            crdu_verify(suite.as_ptr(), 5, 1, &mut passed),
            CrduStatus::Ok
        );
        assert_eq!(passed, 5);
        let bad = CString::new("bogus").unwrap();
        assert_eq!(
            crdu_verify(bad.as_ptr(), 5, 1, &mut passed),
            CrduStatus::NotFound
        );
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(crdu_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/crdu.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "crdu_model_from_json",
        "crdu_model_free",
        "crdu_model_value",
        "crdu_model_robust_value",
        "crdu_last_error",
        "CRDU_STATUS_EMPTY_CORE",
    ] {
        assert!(text.contains(f), "header lacks {f}");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(status.success());
}
