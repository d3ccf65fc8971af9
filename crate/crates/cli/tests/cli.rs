//! End-to-end runs of the `nearconvex` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearconvex")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn solve_sample_instance() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.txt", "3 6\n3 2\n4 3\n5 4\n");
    for algo in ["bellman", "fast", "symmetric", "auto"] {
        let o = bin(&["solve", "--algo", algo, "--items", &f]);
        assert!(o.status.success(), "{algo}");
        assert_eq!(stdout(&o), "OPT 8\nITEMS 1 3\n");
    }
    assert_eq!(stdout(&bin(&["solve", "--algo", "bellman", &f])), "OPT 8\n");
}

#[test]
fn fixed_seed_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("big.txt");
    let gen = bin(&["gen", "instance", "--n", "200", "--pmax", "30", "--wmax", "30", "--seed", "5", "--out", out.to_str().unwrap()]);
    assert!(gen.status.success());
    let again = bin(&["gen", "instance", "--n", "200", "--pmax", "30", "--wmax", "30", "--seed", "5"]);
    assert_eq!(fs::read_to_string(&out).unwrap(), stdout(&again));
    let path = out.to_str().unwrap();
    for algo in ["fast", "symmetric"] {
        let a = bin(&["solve", "--algo", algo, "--seed", "1", "--items", path]);
        let b = bin(&["solve", "--algo", algo, "--seed", "1", "--items", "--threads", "2", path]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        let bell = bin(&["solve", "--algo", "bellman", path]);
        let opt: u64 = stdout(&bell).trim().strip_prefix("OPT ").unwrap().parse().unwrap();
        let got: u64 = stdout(&a).lines().next().unwrap().strip_prefix("OPT ").unwrap().parse().unwrap();
        assert!(got <= opt);
    }
}

#[test]
fn malformed_input_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.txt", "2 6\n3 2\n4 x\n");
    let o = bin(&["solve", &f]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("line 3"), "{err}");
    assert_eq!(bin(&["solve", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(bin(&["solve", "--algo", "quantum", &f]).status.code(), Some(2));
}

#[test]
fn convolve_min_and_max() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.txt", "2 0\n0 1\n");
    let g = write(dir.path(), "g.txt", "2 0\n0 2\n");
    assert_eq!(stdout(&bin(&["convolve", "--mode", "min", &f, &g])), "3 0\n0 1 3\n");
    assert_eq!(stdout(&bin(&["convolve", "--mode", "max", &f, &g])), "3 0\n0 2 3\n");
    let bad = write(dir.path(), "bad.txt", "3 0\n1 2\n");
    assert_eq!(bin(&["convolve", &bad, &g]).status.code(), Some(2));
}

#[test]
fn generated_sequences_convolve() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    let g = dir.path().join("g.txt");
    for (p, seed) in [(&f, "1"), (&g, "2")] {
        let o = bin(&["gen", "seq", "--len", "100", "--delta", "8", "--seed", seed, "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let o = bin(&["convolve", f.to_str().unwrap(), g.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("199 0\n"));
}

#[test]
fn verify_subset_passes() {
    let o = bin(&["verify", "--trials", "5", "--only", "1,2,7,10"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.starts_with("[PASS]")));
}

#[test]
fn bench_writes_one_row_per_algo_and_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = bin(&["bench", "--sweep", "n=16,32;wmax=8;pmax=8;seeds=2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "algo,n,wmax,pmax,W,seed,value,wall_ns");
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert!(bin(&["bench", "--sweep", "n=16", "--out", "x.csv"]).status.code() == Some(2));
}
