use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

const GHZ: &str = "dim=2 sites=3 parties=ABC\nXXX\nZZI\nIZZ\n";
const BELL_AC: &str = "dim=2 sites=3 parties=ABC\nXIX\nZIZ\nIZI\n";
const D6: &str = "dim=6 sites=3 parties=ABC\nx1z0.x0z0.x0z3\nx0z0.x1z0.x0z2\nx0z3.x0z2.x1z0\n";

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabtrim")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn canon_reports_one_ghz_pair() {
    let f = file(GHZ);
    let o = run(&["canon", f.path().to_str().unwrap(), "--partition", "A|BC"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pairs=1 entanglement_bits=1"), "{}", stdout(&o));
}

#[test]
fn records_format_starts_with_schema() {
    let f = file(GHZ);
    let o = run(&["--format", "records", "canon", f.path().to_str().unwrap(), "--partition", "A|BC"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "schema=stabtrim-records/1");
    assert!(lines.contains(&"command=canon"));
    assert!(lines.contains(&"pairs=1"));
    assert!(lines.iter().all(|l| l.contains('=')));
}

#[test]
fn trim_exit_codes() {
    let ghz = file(GHZ);
    let o = run(&["trim", ghz.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: trimmed"));

    let bell = file(BELL_AC);
    let o = run(&["trim", bell.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not trimmable"));

    let d6 = file(D6);
    let o = run(&["trim", d6.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not stabilizer-trimmable"));
}

#[test]
fn partition_override_changes_the_verdict() {
    let bell = file(BELL_AC);
    let o = run(&["trim", bell.path().to_str().unwrap(), "--partition", "ACB"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_with_two() {
    let bad = file("dim=2 sites=2\nXQ\n");
    let o = run(&["validate", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run(&["trim"]).status.code(), Some(2));
    assert_eq!(run(&["canon", "/nonexistent/file", "--partition", "A|BC"]).status.code(), Some(2));
}

#[test]
fn empty_survey_is_header_only() {
    let o = run(&["survey", "--sites", "4", "--samples", "0", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "sample,seed,labels,initial_bits,pair_count,b_free_rank,feasible,executed\n");
}

#[test]
fn survey_is_reproducible_across_modes() {
    let args = ["survey", "--sites", "5", "--samples", "40", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = run(&seq);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(stdout(&a).lines().filter(|l| !l.starts_with('#')).count(), 41);
}

#[test]
fn cv_canon_on_a_two_mode_squeezed_plane() {
    let f = file("modes=2\n1 0 -1 0\n0 1 0 1\n");
    let o = run(&["cv-canon", f.path().to_str().unwrap(), "--partition", "AB"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("pairs=1"), "{}", stdout(&o));
}
