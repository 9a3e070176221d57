use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn arnn(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_arnn")).args(args).output().expect("binary runs");
    Output {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(args: &[&str]) -> String {
    let out = arnn(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn index_examples() {
    assert_eq!(ok(&["index", "--alphabet", "ab", "--string", "ab"]), "5\n");
    assert_eq!(ok(&["index", "--alphabet", "ab", "--index", "10"]), "aba\n");
}

#[test]
fn encode_golden() {
    let l = fixture("L.lang");
    assert_eq!(ok(&["encode", "--language", s(&l), "--digits", "25"]), "0100100000100000000000100\n");
}

#[test]
fn dfa_compile_and_run() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("parity.net");
    assert_eq!(ok(&["compile-dfa", "--dfa", s(&fixture("parity.dfa")), "--out", s(&net)]), "");
    assert_eq!(ok(&["run", "--net", s(&net), "--word", "b", "--budget", "32"]), "reject\n");
    assert_eq!(ok(&["run", "--net", s(&net), "--word", "abab", "--budget", "32"]), "accept\n");
    assert_eq!(ok(&["run", "--net", s(&net), "--budget", "32"]), "accept\n");
    assert_eq!(ok(&["classify", "--net", s(&net)]), "bounded-automata\n");

    let budget_too_small = arnn(&["run", "--net", s(&net), "--word", "abab", "--budget", "3"]);
    assert_eq!(budget_too_small.code, 2);
    let foreign = arnn(&["run", "--net", s(&net), "--word", "abc", "--budget", "32"]);
    assert_eq!(foreign.code, 2);
}

#[test]
fn output_is_byte_deterministic() {
    let dfa = fixture("parity.dfa");
    let a = ok(&["compile-dfa", "--dfa", s(&dfa)]);
    let b = ok(&["compile-dfa", "--dfa", s(&dfa)]);
    assert_eq!(a, b);
    let tsm = fixture("anbn.tsm");
    assert_eq!(ok(&["compile-two-stack", "--machine", s(&tsm)]), ok(&["compile-two-stack", "--machine", s(&tsm)]));
}

#[test]
fn two_stack_compile_and_run() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("anbn.net");
    ok(&["compile-two-stack", "--machine", s(&fixture("anbn.tsm")), "--out", s(&net)]);
    assert_eq!(ok(&["run", "--net", s(&net), "--word", "aabb", "--budget", "60"]), "accept\n");
    assert_eq!(ok(&["run", "--net", s(&net), "--word", "aab", "--budget", "60"]), "reject\n");
    assert_eq!(ok(&["classify", "--net", s(&net)]), "turing\n");

    let timeout = arnn(&["run", "--net", s(&net), "--word", "aabb", "--budget", "10"]);
    assert_eq!(timeout.code, 3);
    assert!(timeout.stderr.starts_with("error: timeout"), "{}", timeout.stderr);
    assert!(timeout.stdout.is_empty());
}

#[test]
fn oracle_net_from_an_encoded_language() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("lr.table");
    let net = dir.path().join("m.net");
    ok(&["encode", "--language", s(&fixture("L.lang")), "--digits", "25", "--table-out", s(&table)]);
    ok(&["build-oracle-net", "--oracle", s(&table), "--alphabet", "ab", "--label", "0'", "--out", s(&net)]);
    let text = std::fs::read_to_string(&net).unwrap();
    assert!(text.contains("oracle:lr.table:cantor4@0'"), "{text}");

    for (w, verdict) in [("ab", "accept"), ("b", "reject"), ("", "reject"), ("abbb", "accept"), ("aba", "reject")] {
        assert_eq!(ok(&["run", "--net", s(&net), "--word", w, "--budget", "200"]), format!("{verdict}\n"), "{w}");
    }
    let beyond = arnn(&["run", "--net", s(&net), "--word", "abbbb", "--budget", "300"]);
    assert_eq!(beyond.code, 3);
    assert!(beyond.stderr.contains("horizon exceeded"), "{}", beyond.stderr);

    assert_eq!(ok(&["classify", "--net", s(&net)]), "oracle 0'\n");
    let decoded = ok(&["decode", "--oracle", s(&table), "--alphabet", "ab", "--string", "abb"]);
    assert_eq!(decoded, "1\n");
}

#[test]
fn classify_with_timing_codes_and_lattices() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("parity.net");
    ok(&["compile-dfa", "--dfa", s(&fixture("parity.dfa")), "--out", s(&net)]);
    let sched = fixture("lr.sched");
    assert_eq!(ok(&["classify", "--net", s(&net), "--timing", s(&sched)]), "oracle 0'\n");

    let lattice = fixture("chain.lattice");
    let args = ["classify", "--net", s(&net), "--lattice", s(&lattice), "--timing-label", "x", "--timing-label", "y"];
    assert_eq!(ok(&args), "oracle x y\n");
    let args = ["classify", "--net", s(&net), "--lattice", s(&lattice), "--timing-label", "x", "--timing-label", "0''"];
    assert_eq!(ok(&args), "oracle 0''\n");

    let unknown = arnn(&["classify", "--net", s(&net), "--timing-label", "z"]);
    assert_eq!(unknown.code, 3);
}

#[test]
fn spike_codec_commands() {
    let l = fixture("L.lang");
    let sched = ok(&["spike-encode", "--language", s(&l), "--window", "25", "--label", "0'"]);
    assert_eq!(sched, std::fs::read_to_string(fixture("lr.sched")).unwrap());
    assert_eq!(ok(&["spike-decode", "--schedule", s(&fixture("lr.sched"))]), "0100100000100000000000100\n");
    assert_eq!(ok(&["spike-encode", "--rational", "1/2", "--window", "4"]), "window 4\nspike 1\n");
    assert_eq!(ok(&["spike-encode", "--digits", "0000", "--window", "8"]), "window 8\n");
}

#[test]
fn failures_leave_no_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dfa");
    std::fs::write(&bad, "alphabet ab\nstate q start\ntrans q a q\n").unwrap();
    let out = dir.path().join("bad.net");
    let r = arnn(&["compile-dfa", "--dfa", s(&bad), "--out", s(&out)]);
    assert_eq!(r.code, 2);
    assert!(!out.exists());

    let table = dir.path().join("t.table");
    let r = arnn(&["encode", "--language", s(&fixture("L.lang")), "--digits", "0", "--table-out", s(&table)]);
    assert_eq!(r.code, 0);
    let net = dir.path().join("m.net");
    let r = arnn(&["build-oracle-net", "--oracle", s(&table), "--alphabet", "ab", "--out", s(&net)]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert!(!net.exists());
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 2, "{leftovers:?}");
}

#[test]
fn unknown_sign_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("tie.net");
    std::fs::write(
        &net,
        "neurons 1 inputs 1\nb 0 1 stream:1/3\nc 0 rat:-1/3\nactivation 0 sig\nout_data 0\nout_valid 0\n",
    )
    .unwrap();
    let r = arnn(&["run", "--net", s(&net), "--word", "a", "--budget", "4", "--precision", "32"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("unknown sign"), "{}", r.stderr);
}

#[test]
fn usage_errors() {
    assert_eq!(arnn(&[]).code, 2);
    assert_eq!(arnn(&["run", "--net", "nope.net", "--budget", "4"]).code, 2);
    assert_eq!(arnn(&["index", "--alphabet", "aa", "--string", "a"]).code, 2);
    assert_eq!(arnn(&["--help"]).code, 0);
}
