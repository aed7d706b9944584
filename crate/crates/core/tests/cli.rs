//! The `hecke2` binary end to end: row counts, exit codes, and output that
//! does not depend on the thread count.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke2"))
        .args(args)
        .env_remove("HECKE2_THREADS")
        .output()
        .expect("spawn hecke2")
}

fn jsonl(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON record per line"))
        .collect()
}

/// Rows without the summary record and with timings removed.
fn rows(out: &Output) -> Vec<Value> {
    jsonl(out)
        .into_iter()
        .filter(|r| r.get("summary").is_none())
        .map(|mut r| {
            r.as_object_mut().unwrap().remove("ms");
            r
        })
        .collect()
}

fn summary(out: &Output) -> Value {
    jsonl(out).pop().expect("summary record")["summary"].clone()
}

#[test]
fn kernel_campaign_reports_every_dependency() {
    let out = run(&["--format", "jsonl", "verify", "kernel", "--max-n", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 3334);
    assert!(rows.iter().all(|r| r["status"] == "pass"));
    let n: Vec<u64> = rows.iter().map(|r| r["item"].as_u64().unwrap()).collect();
    assert!(n.iter().all(|n| n % 6 == 0 || n % 6 == 2));
    // C_2 = C_1, C_6 = C_3 + C_4 + C_5, C_8 = C_4
    assert_eq!(rows[1]["witness"]["S"], serde_json::json!([1]));
    assert_eq!(rows[2]["witness"]["S"], serde_json::json!([3, 4, 5]));
    assert_eq!(rows[3]["witness"]["S"], serde_json::json!([4]));
    assert_eq!(summary(&out)["fail"], 0);
}

#[test]
fn single_item_range() {
    let out = run(&["--format", "jsonl", "verify", "u-agreement", "--max-n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows(&out).len(), 1);
    assert_eq!(summary(&out)["rows"], 1);
}

#[test]
fn adapted_depth_two_has_six_cells() {
    let out = run(&["--format", "jsonl", "verify", "adapted", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let items: Vec<String> = rows(&out).iter().map(|r| r["item"].as_str().unwrap().to_string()).collect();
    assert_eq!(items, ["0,0", "1,0", "0,1", "2,0", "1,1", "0,2"]);
}

#[test]
fn bad_prime_is_a_configuration_error() {
    let out = run(&["verify", "hecke-u", "--primes", "11,15"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("15"));
}

#[test]
fn unknown_campaign_is_rejected() {
    let out = run(&["verify", "nonsense"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn output_is_independent_of_thread_count() {
    for args in [
        &["verify", "recurrence", "--max-n", "1500", "--max-m", "20"][..],
        &["verify", "normalize", "--max-n", "1200"][..],
        &["verify", "projection", "--max-m", "30"][..],
        &["verify", "hecke-u", "--depth", "3", "--primes", "11,13"][..],
    ] {
        let one = run(&[&["--format", "jsonl", "--threads", "1"][..], args].concat());
        let four = run(&[&["--format", "jsonl", "--threads", "4"][..], args].concat());
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(four.status.code(), Some(0), "{args:?}");
        assert_eq!(rows(&one), rows(&four), "{args:?}");
    }
}

#[test]
fn text_report_ends_with_summary_table() {
    let out = run(&["verify", "projection", "--max-m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let last = text.lines().last().unwrap();
    let cols: Vec<&str> = last.split_whitespace().collect();
    // m = 0..=3 plus the injectivity row
    assert_eq!(cols, ["projection", "5", "5", "0"]);
}

#[test]
fn emit_sequences_lists_seeds() {
    let out = run(&["--format", "jsonl", "emit", "sequences", "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = jsonl(&out);
    assert_eq!(recs.len(), 6);
    assert_eq!(recs[5]["C"], serde_json::json!([1, 2, 4]));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("hecke2-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.jsonl");
    let out = run(&["--format", "jsonl", "--out", path.to_str().unwrap(), "verify", "wa", "--max-n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.lines().last().unwrap().contains("\"summary\""));
    std::fs::remove_dir_all(&dir).ok();
}
