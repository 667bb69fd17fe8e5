use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use treeaut_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ta_string_free(s);
    out
}

unsafe fn last_error() -> String {
    take(ta_last_error())
}

unsafe fn fixture(name: &str) -> *mut TaAutomaton {
    let mut aut = ptr::null_mut();
    assert_eq!(ta_automaton_fixture(c(name).as_ptr(), &mut aut), TaStatus::Ok);
    aut
}

unsafe fn element(aut: *const TaAutomaton, expr: &str) -> *mut TaElement {
    let mut g = ptr::null_mut();
    assert_eq!(ta_element_parse(aut, c(expr).as_ptr(), &mut g), TaStatus::Ok, "{expr}");
    g
}

#[test]
fn odometer_round_trip() {
    unsafe {
        let aut = fixture("odometer");
        assert_eq!(ta_automaton_alphabet_size(aut), 2);
        let t = element(aut, "t");
        let mut image = ptr::null_mut();
        assert_eq!(ta_element_apply(t, c("110").as_ptr(), &mut image), TaStatus::Ok);
        assert_eq!(take(image), "001");

        let mut t_inv = ptr::null_mut();
        assert_eq!(ta_element_inverse(t, &mut t_inv), TaStatus::Ok);
        let mut prod = ptr::null_mut();
        assert_eq!(ta_element_compose(t, t_inv, &mut prod), TaStatus::Ok);
        let e = element(aut, "1");
        let mut eq = false;
        assert_eq!(ta_element_equals(prod, e, &mut eq), TaStatus::Ok);
        assert!(eq);
        let mut root = ptr::null_mut();
        assert_eq!(ta_element_apply(prod, c("").as_ptr(), &mut root), TaStatus::Ok);
        assert_eq!(take(root), "");

        let t2 = element(aut, "t^2");
        let mut d = 0.0;
        assert_eq!(ta_distance(t2, e, 8, &mut d), TaStatus::Ok);
        assert_eq!(d, 0.5);
        let t256 = element(aut, "t^256");
        assert_eq!(ta_distance(t256, e, 4, &mut d), TaStatus::CapExceeded);
        assert!(last_error().contains("cap"));

        let mut s = ptr::null_mut();
        assert_eq!(ta_element_to_string(t2, &mut s), TaStatus::Ok);
        assert_eq!(take(s), "t*t");

        for g in [t, t_inv, prod, e, t2, t256] {
            ta_element_free(g);
        }
        ta_automaton_free(aut);
    }
}

#[test]
fn stabilizers() {
    unsafe {
        let aut = fixture("grigorchuk");
        let b = element(aut, "b");
        let d = element(aut, "d");
        let mut yes = false;
        assert_eq!(ta_element_in_stab(b, 1, &mut yes), TaStatus::Ok);
        assert!(yes);
        assert_eq!(ta_element_in_rist(d, c("1").as_ptr(), 3, &mut yes), TaStatus::Ok);
        assert!(yes);
        assert_eq!(ta_element_in_rist(d, c("0").as_ptr(), 3, &mut yes), TaStatus::Ok);
        assert!(!yes);
        assert_eq!(ta_element_in_rist(d, c("012").as_ptr(), 3, &mut yes), TaStatus::Vertex);
        assert_eq!(ta_element_in_rist(d, c("01").as_ptr(), 1, &mut yes), TaStatus::Topology);
        ta_element_free(b);
        ta_element_free(d);
        ta_automaton_free(aut);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut aut = ptr::null_mut();
        assert_eq!(ta_automaton_parse(c("state e = id | e e").as_ptr(), &mut aut), TaStatus::Syntax);
        assert!(last_error().contains("line 1"));
        assert!(aut.is_null());
        let undeclared = c("alphabet: 2\nstate e = id | e e\nstate a = (0 1) | e q\n");
        assert_eq!(ta_automaton_parse(undeclared.as_ptr(), &mut aut), TaStatus::Validation);
        assert_eq!(ta_automaton_fixture(c("nope").as_ptr(), &mut aut), TaStatus::UnknownFixture);
        assert_eq!(ta_automaton_fixture(ptr::null(), &mut aut), TaStatus::NullPointer);
        let bad_utf8 = [0xffu8, 0];
        assert_eq!(ta_automaton_fixture(bad_utf8.as_ptr().cast(), &mut aut), TaStatus::InvalidUtf8);

        let od = fixture("odometer");
        let rs = fixture("rootswap");
        let mut g = ptr::null_mut();
        assert_eq!(ta_element_parse(od, c("t*").as_ptr(), &mut g), TaStatus::Expression);
        assert_eq!(ta_element_parse(od, c("t").as_ptr(), ptr::null_mut()), TaStatus::NullPointer);
        let t = element(od, "t");
        let a = element(rs, "a");
        let mut prod = ptr::null_mut();
        assert_eq!(ta_element_compose(t, a, &mut prod), TaStatus::Group);
        assert!(last_error().contains("different automata"));
        assert_eq!(ta_element_compose(t, ptr::null(), &mut prod), TaStatus::NullPointer);

        // a successful call clears the message
        let mut yes = false;
        assert_eq!(ta_element_in_stab(t, 0, &mut yes), TaStatus::Ok);
        assert!(ta_last_error().is_null());

        ta_string_free(ptr::null_mut());
        ta_element_free(ptr::null_mut());
        ta_automaton_free(ptr::null_mut());
        ta_element_free(t);
        ta_element_free(a);
        ta_automaton_free(od);
        ta_automaton_free(rs);
    }
}

#[test]
fn verification_reports() {
    unsafe {
        for suite in ["d-topology", "discreteness", "smooth-curves"] {
            let mut report = ptr::null_mut();
            assert_eq!(ta_verify(c(suite).as_ptr(), ptr::null(), &mut report), TaStatus::Ok);
            let text = take(report);
            assert!(text.lines().all(|l| l.split('\t').nth(2) == Some("PASS")), "{text}");
        }
        let aut = fixture("grigorchuk");
        let mut report = ptr::null_mut();
        assert_eq!(ta_verify(c("axioms").as_ptr(), aut, &mut report), TaStatus::Ok);
        assert!(take(report).contains("relation[b*c=d]\tPASS"));
        assert_eq!(ta_verify(c("nope").as_ptr(), aut, &mut report), TaStatus::UnknownSuite);
        ta_automaton_free(aut);
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/treeaut.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "ta_last_error",
        "ta_string_free",
        "ta_automaton_parse",
        "ta_automaton_fixture",
        "ta_automaton_free",
        "ta_automaton_alphabet_size",
        "ta_element_parse",
        "ta_element_free",
        "ta_element_compose",
        "ta_element_inverse",
        "ta_element_to_string",
        "ta_element_apply",
        "ta_element_equals",
        "ta_element_in_stab",
        "ta_element_in_rist",
        "ta_distance",
        "ta_verify",
        "TA_STATUS_CAP_EXCEEDED = 9",
        "typedef struct TaElement TaElement;",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "treeaut.h"

int main(void) {
    TaAutomaton *aut = NULL;
    TaElement *t = NULL;
    char *image = NULL;
    if (ta_automaton_fixture("odometer", &aut) != TA_STATUS_OK) return 1;
    if (ta_element_parse(aut, "t", &t) != TA_STATUS_OK) return 2;
    if (ta_element_apply(t, "110", &image) != TA_STATUS_OK) return 3;
    int ok = strcmp(image, "001") == 0;
    ta_string_free(image);
    if (ta_element_parse(aut, "q", &t) != TA_STATUS_EXPRESSION) return 4;
    char *msg = ta_last_error();
    ok = ok && msg != NULL;
    ta_string_free(msg);
    ta_element_free(t);
    ta_automaton_free(aut);
    puts(ok ? "ok" : "bad");
    return ok ? 0 : 5;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    // target/<profile>/deps/<this test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libtreeaut_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let work = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = work.join("smoke.c");
    let exe = work.join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is on PATH");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
    assert!(out.status.success());
}
