use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use serde_json::Value;
use submatroid_ffi::*;

fn take(s: *mut c_char) -> Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { sm_string_free(s) };
    v
}

fn last_error() -> String {
    let p = sm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Handle(*mut SmInstance);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { sm_instance_free(self.0) };
    }
}

#[test]
fn tight_general_round_trip_and_solve() {
    let mut raw = ptr::null_mut();
    assert_eq!(
        unsafe { sm_instance_tight_general(0.5, 1.5, 4, &mut raw) },
        SmStatus::Ok
    );
    let inst = Handle(raw);

    let mut summary = SmInstanceSummary::default();
    assert_eq!(unsafe { sm_instance_summary(inst.0, &mut summary) }, SmStatus::Ok);
    assert_eq!((summary.elements, summary.rank, summary.users), (8, 4, 0));

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sm_instance_to_json(inst.0, &mut json) }, SmStatus::Ok);
    let text = unsafe { CString::from(CStr::from_ptr(json)) };
    unsafe { sm_string_free(json) };
    let mut copy = ptr::null_mut();
    assert_eq!(
        unsafe { sm_instance_from_json(text.as_ptr(), true, &mut copy) },
        SmStatus::Ok
    );
    let copy = Handle(copy);

    let policy = CString::new("prefer:eps*").unwrap();
    let opts = SmOptions {
        tie_policy: policy.as_ptr(),
        ..sm_options_default()
    };
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sm_solve(copy.0, &opts, &mut out) }, SmStatus::Ok);
    let report = take(out);
    let expected = 1.5 * (0..4).map(|i| 0.75f64.powi(i)).sum::<f64>();
    assert!((report["final_value"].as_f64().unwrap() - expected).abs() < 1e-12);
    assert!(sm_last_error_message().is_null());
}

#[test]
fn verify_and_validate_report_status() {
    let mut raw = ptr::null_mut();
    assert_eq!(unsafe { sm_instance_random_partition(4, 2, 4, &mut raw) }, SmStatus::Ok);
    let inst = Handle(raw);
    let opts = SmOptions {
        algorithm: SmAlgorithm::GreedyOn,
        ..sm_options_default()
    };
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sm_verify(inst.0, &opts, &mut out) }, SmStatus::Ok);
    let report = take(out);
    assert_eq!(report["verification"]["online"]["permutations"], 24);

    assert_eq!(unsafe { sm_validate(inst.0, &mut out) }, SmStatus::Ok);
    assert_eq!(take(out)["passed"], true);

    let broken = CString::new(
        r#"{"format_version":1,"ground":{"size":2},
            "matroid":{"kind":"explicit","independent_sets":[[],[0],[0,1]]},
            "valuation":{"kind":"modular","weights":[1,1]}}"#,
    )
    .unwrap();
    let mut raw = ptr::null_mut();
    assert_eq!(
        unsafe { sm_instance_from_json(broken.as_ptr(), true, &mut raw) },
        SmStatus::ValidationFailed
    );
    assert!(raw.is_null());
    assert!(last_error().contains("matroid axiom"));
    assert_eq!(
        unsafe { sm_instance_from_json(broken.as_ptr(), false, &mut raw) },
        SmStatus::Ok
    );
    let loose = Handle(raw);
    assert_eq!(unsafe { sm_validate(loose.0, &mut out) }, SmStatus::ValidationFailed);
    assert_eq!(take(out)["passed"], false);
}

#[test]
fn errors_set_status_and_message() {
    let mut raw = ptr::null_mut();
    assert_eq!(
        unsafe { sm_instance_tight_partition(0.5, 2.1, 1e-6, 4, &mut raw) },
        SmStatus::InvalidArgument
    );
    assert!(last_error().contains("1/(1-c)"));

    let bad = CString::new("{ nope").unwrap();
    assert_eq!(
        unsafe { sm_instance_from_json(bad.as_ptr(), true, &mut raw) },
        SmStatus::ParseError
    );
    assert!(last_error().contains("line 1"));

    assert_eq!(
        unsafe { sm_instance_from_json(ptr::null(), true, &mut raw) },
        SmStatus::NullPointer
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { sm_solve(ptr::null(), &sm_options_default(), &mut out) },
        SmStatus::NullPointer
    );

    assert_eq!(
        unsafe { sm_instance_tight_general(0.5, 1.5, 3, &mut raw) },
        SmStatus::Ok
    );
    let inst = Handle(raw);
    let arrival = [0usize, 1, 2];
    let opts = SmOptions {
        algorithm: SmAlgorithm::GreedyM,
        arrival: arrival.as_ptr(),
        arrival_len: arrival.len(),
        ..sm_options_default()
    };
    assert_eq!(unsafe { sm_solve(inst.0, &opts, &mut out) }, SmStatus::InvalidArgument);
    assert!(out.is_null());
    assert!(last_error().contains("usage error"));
    unsafe { sm_instance_free(ptr::null_mut()) };
    unsafe { sm_string_free(ptr::null_mut()) };
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(sm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "submatroid.h"

int main(void) {
    SmInstance *inst = NULL;
    if (sm_instance_tight_partition(0.5, 1.5, 1e-6, 8, &inst) != SM_STATUS_OK) return 10;
    SmInstanceSummary s;
    if (sm_instance_summary(inst, &s) != SM_STATUS_OK || s.users != 2 || s.resources != 8) return 11;
    SmOptions opts = sm_options_default();
    opts.algorithm = SM_ALGORITHM_GREEDY_M;
    char *report = NULL;
    if (sm_verify(inst, &opts, &report) != SM_STATUS_OK) return 12;
    if (strstr(report, "\"pass\": true") == NULL) return 13;
    sm_string_free(report);
    opts.tie_policy = "bogus";
    if (sm_solve(inst, &opts, &report) != SM_STATUS_INVALID_ARGUMENT) return 14;
    if (sm_last_error_message() == NULL) return 15;
    sm_instance_free(inst);
    printf("ok %s\n", sm_version());
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libsubmatroid_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
