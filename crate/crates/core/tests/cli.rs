use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use grl::kernel::{build_rlambda, cut, Direction};
use grl::print::{proof_to_string, ASCII};
use grl::{check_proof, parse_proof, KernelOptions};

fn grl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("grl-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn fixtures_round_trip_through_check() {
    let dir = scratch("fixtures");
    let o = grl(&["fixtures", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut files: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(files.len() >= 6);
    for f in &files {
        let o = grl(&["check", f.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", f.display(), stdout(&o));
        assert!(stdout(&o).starts_with("OK height="));
        let o = grl(&["parse", f.to_str().unwrap()]);
        let reparsed = parse_proof(stdout(&o).as_str()).unwrap();
        assert!(check_proof(&reparsed, &KernelOptions::default()).is_ok());
    }
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_reports_rejection_path() {
    let dir = scratch("reject");
    let bad = dir.join("bad.rlp");
    fs::write(&bad, "(wr (seq (P(#a)) (P(#a), Q(#a)))\n  (ax (seq (P(#b)) (P(#b)))))\n").unwrap();
    let o = grl(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let line = stdout(&o) + &stderr(&o);
    assert!(line.contains("REJECT path=root"), "{line}");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn eliminate_cut_writes_trace_and_cut_free_proof() {
    let dir = scratch("cut");
    let inst = grl::fixtures::pq();
    let p = cut(
        build_rlambda(&inst, Direction::Left).unwrap(),
        build_rlambda(&inst, Direction::Right).unwrap(),
        &inst.expansion(),
    );
    let file = dir.join("pq_cut.rlp");
    fs::write(&file, proof_to_string(&p, &ASCII)).unwrap();
    let o = grl(&["eliminate-cut", "--emit-trace", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let trace = stderr(&o);
    assert!(trace.lines().count() >= 1);
    assert!(trace.lines().all(|l| l.starts_with("step ")), "{trace}");
    let out = parse_proof(stdout(&o).as_str()).unwrap();
    let checked = check_proof(&out, &KernelOptions::default()).unwrap();
    assert!(checked.root().is_cut_free());
    assert!(checked.end_sequent().same_as(&p.conclusion));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn prove_and_countermodel_exit_codes() {
    let o = grl(&["prove", "(lam x. P(x)) (iota y. Q(y)) => exists x. P(x)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(check_proof(&parse_proof(stdout(&o).as_str()).unwrap(), &KernelOptions::default()).is_ok());

    let o = grl(&["prove", "P(#a) => P(#b)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("domain: 2"));

    let o = grl(&["countermodel", "P(#a) => P(#a)", "--max-size", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn translate_and_unicode_output() {
    let dir = scratch("translate");
    let f = dir.join("f.rlf");
    fs::write(&f, "(lam x. P(x)) (iota y. Q(y))\n").unwrap();
    let o = grl(&["translate", f.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "exists x. (forall y. Q(y) <-> y = x) & P(x)");
    let o = grl(&["--unicode", "translate", f.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "∃x. (∀y. Q(y) ↔ y = x) ∧ P(x)");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors() {
    assert_eq!(grl(&[]).status.code(), Some(3));
    assert_eq!(grl(&["prove", "P(#a) =>", "--depth", "deep"]).status.code(), Some(3));
    assert_eq!(grl(&["check", "/nonexistent/x.rlp"]).status.code(), Some(3));
    assert_eq!(grl(&["--help"]).status.code(), Some(0));
}
