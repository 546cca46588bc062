use std::path::{Path, PathBuf};
use std::process::Command;

use counterheads::cli::{machine_to_json, parse_machine_file, Machine};
use counterheads::suite;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_counterheads"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("machines").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn fixtures_match_the_suite() {
    let mut expected: Vec<(&str, Machine)> = Vec::new();
    expected.extend(suite::strict_suite().into_iter().map(|(n, m, _)| (n, Machine::MultiHead(m))));
    expected.extend(suite::unary_suite().into_iter().map(|(n, m)| (n, Machine::MultiHead(m))));
    expected.extend(suite::counter_suite().into_iter().map(|(n, c)| (n, Machine::Counter(c))));
    expected.push(("zigzag_quadratic", Machine::Counter(suite::zigzag_quadratic())));
    for (name, m) in expected {
        let path = fixture(&format!("{name}.json"));
        assert_eq!(parse_machine_file(&path).unwrap(), m, "{name}");
        assert_eq!(std::fs::read_to_string(&path).unwrap().trim_end(), machine_to_json(&m), "{name}");
    }
}

#[test]
fn run_exit_codes() {
    let anbn = fixture("anbn_2head.json");
    let anbn = anbn.to_str().unwrap();
    let (code, out, _) = run(&["run", "--machine", anbn, "--input", "aabb"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"verdict\": \"accept\""));
    assert_eq!(run(&["run", "--machine", anbn, "--input", "aab"]).0, 1);
    let zigzag = fixture("zigzag_quadratic.json");
    assert_eq!(run(&["run", "--machine", zigzag.to_str().unwrap(), "--input", "aaaabbbb", "--limit", "1"]).0, 2);
    let (code, _, err) = run(&["run", "--machine", anbn, "--input", "abc"]);
    assert_eq!(code, 3);
    assert!(err.contains("alphabet"), "{err}");
    let overflow = fixture("overflow_block_1counter.json");
    assert_eq!(run(&["run", "--machine", overflow.to_str().unwrap(), "--input", "aa"]).0, 3);
}

#[test]
fn trace_adds_audit_fields() {
    let m = fixture("anbn_1counter.json");
    let (_, plain, _) = run(&["run", "--machine", m.to_str().unwrap(), "--input", "ab"]);
    let (_, traced, _) = run(&["run", "--machine", m.to_str().unwrap(), "--input", "ab", "--trace"]);
    assert!(!plain.contains("max_values"));
    assert!(traced.contains("max_values"));
}

#[test]
fn register_machine_takes_a_number() {
    let m = fixture("register_halves.json");
    assert_eq!(run(&["run", "--machine", m.to_str().unwrap(), "--input", "10"]).0, 0);
    assert_eq!(run(&["run", "--machine", m.to_str().unwrap(), "--input", "7"]).0, 1);
}

#[test]
fn crossvalidate_reports_agreement() {
    let m = fixture("anbn_2head.json");
    let (code, out, _) = run(&[
        "crossvalidate",
        "--machine",
        m.to_str().unwrap(),
        "--bound",
        "a,b",
        "--max-len",
        "24",
        "--mode",
        "heads_to_counters",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("agree: all"));
    let c = fixture("equal_count_2counter.json");
    let (code, out, _) = run(&[
        "crossvalidate",
        "--machine",
        c.to_str().unwrap(),
        "--bound",
        "a,b",
        "--max-len",
        "0",
        "--mode",
        "counters_to_heads",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("\"checked\": 1"));
    let (code, _, err) = run(&[
        "crossvalidate",
        "--machine",
        c.to_str().unwrap(),
        "--bound",
        "a,b",
        "--max-len",
        "4",
        "--mode",
        "registers",
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("multi-head"), "{err}");
}

#[test]
fn simulate_includes_the_audit() {
    let m = fixture("anbncn_3head.json");
    let (code, out, _) = run(&[
        "simulate",
        "--machine",
        m.to_str().unwrap(),
        "--via",
        "counters",
        "--bound",
        "a,b,c",
        "--input",
        "aabbcc",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["audit"]["counters_used"], 2);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pal.csv");
    let (code, _, _) =
        run(&["bench", "--acceptor", "palindrome2c", "--from", "128", "--to", "1024", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["n", "steps", "verdict", "max_counter"]);
    let steps: Vec<u64> = rows.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(steps.len(), 4);
    assert!(steps.windows(2).all(|w| w[0] < w[1]));
    // same arguments, same bytes
    let (_, again, _) = run(&["bench", "--acceptor", "palindrome2c", "--from", "128", "--to", "1024"]);
    assert_eq!(again, text);
    let (code, out, _) = run(&["bench", "--acceptor", "ww"]);
    assert_eq!((code, out.as_str()), (0, "n,steps,verdict,max_counter\n"));
    assert_eq!(run(&["bench", "--acceptor", "nope"]).0, 3);
    assert_eq!(run(&["bench", "--acceptor", "ww", "--n", "4", "--out", "/nonexistent/dir/x.csv"]).0, 3);
}

#[test]
fn encode_and_speedup_emit_json() {
    let (code, out, _) = run(&["encode", "--bound", "ab,c", "--input", "ababcc"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["items"][0]["run"]["count"], 2);
    let m = fixture("zigzag_quadratic.json");
    let (code, out, _) =
        run(&["speedup", "--machine", m.to_str().unwrap(), "--bound", "a,b", "--input", "aaabbb", "--c", "0.5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["units"].as_u64().unwrap() < v["raw_steps"].as_u64().unwrap());
    assert_eq!(run(&["speedup", "--machine", m.to_str().unwrap(), "--bound", "a,b", "--input", "ab", "--c", "0"]).0, 3);
}

#[test]
fn bad_machine_files_are_diagnosed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"kind\": \"counter\",\n \"states\": [\"s\"], \"start\": \"t\", \"counters\": 0}").unwrap();
    let (code, _, err) = run(&["run", "--machine", path.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("start") && err.contains("\"t\""), "{err}");
    assert_eq!(run(&["frobnicate"]).0, 3);
}
