use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use arnn_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = arnn_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    arnn_string_free(s);
    out
}

const PARITY: &str = "alphabet ab\nstate even accept start\nstate odd\n\
                      trans even a even\ntrans even b odd\ntrans odd a odd\ntrans odd b even\n";

#[test]
fn index_roundtrip() {
    let ab = c("ab");
    let mut i = 0u64;
    assert_eq!(unsafe { arnn_index_of_string(ab.as_ptr(), c("ab").as_ptr(), &mut i) }, ArnnStatus::Ok);
    assert_eq!(i, 5);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { arnn_string_of_index(ab.as_ptr(), 10, &mut s) }, ArnnStatus::Ok);
    assert_eq!(unsafe { take(s) }, "aba");
    assert_eq!(unsafe { arnn_string_of_index(ab.as_ptr(), 0, &mut s) }, ArnnStatus::InvalidArgument);
    assert!(!last_error().is_empty());
}

#[test]
fn encode_language() {
    let mut s = ptr::null_mut();
    let lang = c("alphabet: ab\nrule: regex ab*\n");
    assert_eq!(unsafe { arnn_encode_language(lang.as_ptr(), 25, &mut s) }, ArnnStatus::Ok);
    assert_eq!(unsafe { take(s) }, "0100100000100000000000100");
}

#[test]
fn dfa_network_lifecycle() {
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { arnn_compile_dfa(c(PARITY).as_ptr(), &mut net) }, ArnnStatus::Ok);
    assert!(unsafe { arnn_network_neuron_count(net) } > 0);
    let mut v = ArnnVerdict::Accept;
    assert_eq!(unsafe { arnn_network_run(net, c("b").as_ptr(), 32, 64, &mut v) }, ArnnStatus::Ok);
    assert_eq!(v, ArnnVerdict::Reject);
    assert_eq!(unsafe { arnn_network_run(net, c("bb").as_ptr(), 32, 64, &mut v) }, ArnnStatus::Ok);
    assert_eq!(v, ArnnVerdict::Accept);
    assert_eq!(unsafe { arnn_network_run(net, c("abc").as_ptr(), 32, 64, &mut v) }, ArnnStatus::InvalidArgument);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { arnn_network_to_text(net, &mut text) }, ArnnStatus::Ok);
    let text = unsafe { take(text) };
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { arnn_network_parse(c(&text).as_ptr(), ptr::null(), &mut again) }, ArnnStatus::Ok);
    assert_eq!(unsafe { arnn_network_neuron_count(again) }, unsafe { arnn_network_neuron_count(net) });

    let mut class = ptr::null_mut();
    assert_eq!(unsafe { arnn_network_classify(net, ptr::null(), 0, &mut class) }, ArnnStatus::Ok);
    assert_eq!(unsafe { take(class) }, "bounded-automata");
    let jump = c("0'");
    let labels = [jump.as_ptr()];
    assert_eq!(unsafe { arnn_network_classify(net, labels.as_ptr(), 1, &mut class) }, ArnnStatus::Ok);
    assert_eq!(unsafe { take(class) }, "oracle 0'");

    unsafe {
        arnn_network_free(net);
        arnn_network_free(again);
        arnn_network_free(ptr::null_mut());
    }
}

#[test]
fn two_stack_timeout() {
    let machine = include_str!("../../core/tests/fixtures/anbn.tsm");
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { arnn_compile_two_stack(c(machine).as_ptr(), &mut net) }, ArnnStatus::Ok);
    let mut v = ArnnVerdict::Reject;
    assert_eq!(unsafe { arnn_network_run(net, c("aabb").as_ptr(), 60, 64, &mut v) }, ArnnStatus::Ok);
    assert_eq!(v, ArnnVerdict::Accept);
    assert_eq!(unsafe { arnn_network_run(net, c("aabb").as_ptr(), 10, 64, &mut v) }, ArnnStatus::Timeout);
    assert!(last_error().contains("10 ticks"));
    unsafe { arnn_network_free(net) };
}

#[test]
fn oracle_network_horizon() {
    let bits: Vec<u8> = "0100100000100000000000100".bytes().map(|b| b - b'0').collect();
    let mut net = ptr::null_mut();
    let status =
        unsafe { arnn_build_oracle_net(bits.as_ptr(), bits.len(), c("ab").as_ptr(), c("0'").as_ptr(), &mut net) };
    assert_eq!(status, ArnnStatus::Ok);
    let mut v = ArnnVerdict::Reject;
    assert_eq!(unsafe { arnn_network_run(net, c("abb").as_ptr(), 200, 64, &mut v) }, ArnnStatus::Ok);
    assert_eq!(v, ArnnVerdict::Accept);
    assert_eq!(unsafe { arnn_network_run(net, c("abbbb").as_ptr(), 300, 64, &mut v) }, ArnnStatus::HorizonExceeded);
    let mut class = ptr::null_mut();
    assert_eq!(unsafe { arnn_network_classify(net, ptr::null(), 0, &mut class) }, ArnnStatus::Ok);
    assert_eq!(unsafe { take(class) }, "oracle 0'");
    unsafe { arnn_network_free(net) };

    let status = unsafe { arnn_build_oracle_net(bits.as_ptr(), 0, c("ab").as_ptr(), ptr::null(), &mut net) };
    assert_eq!(status, ArnnStatus::Construction);
}

#[test]
fn null_and_bad_arguments() {
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { arnn_compile_dfa(ptr::null(), &mut net) }, ArnnStatus::NullArgument);
    assert_eq!(unsafe { arnn_compile_dfa(c(PARITY).as_ptr(), ptr::null_mut()) }, ArnnStatus::NullArgument);
    assert_eq!(unsafe { arnn_compile_dfa(c("state").as_ptr(), &mut net) }, ArnnStatus::Parse);
    assert!(last_error().contains("line"), "{}", last_error());
    let bad = [0xffu8, 0];
    let mut i = 0;
    assert_eq!(unsafe { arnn_index_of_string(bad.as_ptr().cast(), c("a").as_ptr(), &mut i) }, ArnnStatus::InvalidUtf8);
    let mut v = ArnnVerdict::Reject;
    assert_eq!(unsafe { arnn_network_run(ptr::null(), c("a").as_ptr(), 4, 64, &mut v) }, ArnnStatus::NullArgument);
    assert_eq!(unsafe { arnn_network_neuron_count(ptr::null()) }, 0);
    assert_eq!(unsafe { arnn_network_load(c("/nonexistent.net").as_ptr(), &mut net) }, ArnnStatus::Parse);
}

#[test]
fn success_clears_the_error() {
    let mut i = 0;
    assert_ne!(unsafe { arnn_index_of_string(c("aa").as_ptr(), c("a").as_ptr(), &mut i) }, ArnnStatus::Ok);
    assert!(!arnn_last_error_message().is_null());
    assert_eq!(unsafe { arnn_index_of_string(c("ab").as_ptr(), c("a").as_ptr(), &mut i) }, ArnnStatus::Ok);
    assert!(arnn_last_error_message().is_null());
    assert_eq!(unsafe { CStr::from_ptr(arnn_version()) }.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(header_dir().join("arnn.h")).unwrap();
    for name in [
        "arnn_network_load",
        "arnn_network_run",
        "arnn_compile_dfa",
        "arnn_build_oracle_net",
        "arnn_last_error_message",
        "ARNN_STATUS_HORIZON_EXCEEDED",
        "typedef struct ArnnNetwork ArnnNetwork",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "arnn.h"

int main(void) {
    const char *dfa = "alphabet ab\nstate e accept start\nstate o\n"
                      "trans e a e\ntrans e b o\ntrans o a o\ntrans o b e\n";
    ArnnNetwork *net = NULL;
    if (arnn_compile_dfa(dfa, &net) != ARNN_STATUS_OK) return 1;
    ArnnVerdict v;
    if (arnn_network_run(net, "bab", 32, 64, &v) != ARNN_STATUS_OK) return 2;
    if (v != ARNN_VERDICT_ACCEPT) return 3;
    if (arnn_network_run(net, "ba", 32, 64, &v) != ARNN_STATUS_OK || v != ARNN_VERDICT_REJECT) return 4;
    if (arnn_network_run(net, "bab", 1, 64, &v) != ARNN_STATUS_INVALID_ARGUMENT) return 5;
    arnn_network_free(net);
    uint64_t i = 0;
    if (arnn_index_of_string("ab", "ab", &i) != ARNN_STATUS_OK || i != 5) return 6;
    printf("ok\n");
    return 0;
}
"#;

/// Compiles and links a C client against the header and static library
/// when a C compiler and the archive are available.
#[test]
fn c_client_links_and_runs() {
    let Some(lib_dir) = std::env::current_exe().ok().and_then(|p| p.parent()?.parent().map(Path::to_path_buf)) else {
        return;
    };
    let archive = lib_dir.join("libarnn_ffi.a");
    if !archive.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no archive at {} or no cc", archive.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let exe = dir.path().join("client");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header_dir())
        .arg(&src)
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(out.stdout, b"ok\n");
}
