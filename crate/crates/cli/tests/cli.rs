//! End-to-end behavior of the binary: values, tables, series dumps,
//! verification exit codes, cache resilience.

use std::path::Path;
use std::process::{Command, Output};

use pathpairs::closedform;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathpairs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn compute_known_values() {
    let cases: &[(&[&str], &str)] = &[
        (&["compute", "M", "--n", "3", "--k", "0", "--r", "1", "--s", "2"], "3"),
        (&["compute", "NK", "--n", "3", "--k", "2", "--r", "1"], "3"),
        (&["compute", "NE", "--n", "2", "--k", "0", "--p", "1"], "4"),
        (&["compute", "NO", "--n", "2", "--k", "0", "--p", "0"], "2"),
        (&["compute", "ROWSUM", "--n", "2", "--k", "0"], "4"),
        (&["compute", "NKROWSUM", "--n", "3", "--k", "2"], "8"),
        (
            &["compute", "LAGRANGE", "--a", "0", "--b", "0", "--c", "1", "--l", "2", "--m", "2"],
            "3",
        ),
        // Case-insensitive kind.
        (&["compute", "nk", "--n", "3", "--k", "0", "--r", "1"], "2"),
    ];
    for (args, expected) in cases {
        let out = run(args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert_eq!(stdout(&out).trim(), *expected, "{args:?}");
    }
}

#[test]
fn compute_prints_wide_values_in_full() {
    let out = run(&["compute", "ROWSUM", "--n", "40", "--k", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out).trim(),
        (closedform::row_sum(40, 0)).to_string()
    );
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["compute", "M", "--n", "3"] as &[&str],
        &["compute", "BOGUS", "--n", "1"],
        &["table", "X", "--n", "2"],
        &["table", "NK", "--n", "2", "--format", "yaml"],
        &["gf", "nosuch", "--cap", "3"],
        &["gf", "u0pow", "--cap", "3"],
        &["verify", "--mutate", "bogus:1"],
        &["nosuchcommand"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}");
    }
}

#[test]
fn gf_dumps() {
    let out = run(&["gf", "f", "--cap", "2"]);
    assert_eq!(stdout(&out), "cap=2\n1 1 1\n");

    let out = run(&["gf", "u0pow", "--k", "1", "--cap", "2"]);
    let text = stdout(&out);
    for line in ["0 1 1", "1 0 1", "1 1 2"] {
        assert!(text.contains(line), "{text}");
    }

    let out = run(&["gf", "ne", "--k", "0", "--cap", "2"]);
    assert!(stdout(&out).contains("1 1 4"));

    // mdiag with k=0, j=1 is f/x; the pair count 3 for n=3, r=1, s=2 sits
    // at exponent (1, 2).
    let out = run(&["gf", "mdiag", "--k", "0", "--j", "1", "--cap", "4"]);
    assert!(stdout(&out).contains("1 2 3"));
}

#[test]
fn table_nk_csv_and_small_m() {
    let out = run(&["table", "NK", "--n", "2", "--format", "csv"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,r,value");
    assert!(lines.contains(&"0,1,2"));
    assert!(lines.contains(&"1,1,2"));

    let out = run(&["table", "M", "--n", "1"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).map(str::trim).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row.starts_with("0 "));
        assert!(row.ends_with(" 1"));
    }

    let out = run(&["table", "NE", "--n", "0", "--format", "csv"]);
    assert_eq!(stdout(&out), "k,p,value\n");
}

#[test]
fn csv_table_round_trips_against_fresh_computation() {
    let n = 6i64;
    let out = run(&["table", "M", "--n", "6", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,r,s,value"));
    let mut seen = 0;
    for line in lines {
        let cells: Vec<i64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let [k, r, s, value] = cells[..] else {
            panic!("bad row {line:?}")
        };
        let fresh = closedform::m_value(closedform::PairQuery::new(n, k, r, s)).unwrap();
        assert_eq!(fresh.to_string(), value.to_string(), "row {line:?}");
        seen += 1;
    }
    assert_eq!(seen, n * (n + 1) * (n + 1));
}

#[test]
fn json_table_round_trips() {
    let out = run(&["table", "NK", "--n", "4", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["columns"], serde_json::json!(["k", "r", "value"]));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4 * 5);
    for row in rows {
        let k: i64 = row["k"].as_str().unwrap().parse().unwrap();
        let r: i64 = row["r"].as_str().unwrap().parse().unwrap();
        let fresh = closedform::nk_value(4, k, r).unwrap().to_string();
        assert_eq!(row["value"].as_str().unwrap(), fresh);
    }
}

#[test]
fn table_out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nk.csv");
    let out = run(&["table", "NK", "--n", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("k,r,value\n"));
}

#[test]
fn verify_small_run_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--max-n",
        "8",
        "--max-n-oracle",
        "4",
        "--cap",
        "6",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("verdict: pass"));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(doc["verdict"], "pass");
    assert!(doc["checks"].as_array().unwrap().len() >= 17);
}

#[test]
fn verify_without_oracle_passes_with_empty_oracle_grids() {
    let out = run(&["verify", "--max-n", "8", "--max-n-oracle", "0", "--cap", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("m-vs-oracle              pass  0 instances"), "{text}");
}

#[test]
fn verify_mutation_flips_exit_code() {
    let out = run(&[
        "verify", "--max-n", "8", "--max-n-oracle", "4", "--cap", "6", "--mutate", "nk:3,1,1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("verdict: FAIL"));
}

#[test]
fn verify_recovers_from_corrupted_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap().to_string();
    let args = [
        "verify", "--max-n", "6", "--max-n-oracle", "3", "--cap", "4", "--cache", &cache,
    ];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    assert!(Path::new(&cache).join("oracle-n3.json").exists());

    std::fs::write(Path::new(&cache).join("oracle-n3.json"), "garbage").unwrap();
    let second = run(&args);
    assert_eq!(code(&second), 0, "corruption must not fail the run");
    let stderr = String::from_utf8(second.stderr.clone()).unwrap();
    assert!(stderr.contains("warning:"), "{stderr}");
    // The document was rewritten and is valid again.
    pathpairs::oracle::read_cache(&Path::new(&cache).join("oracle-n3.json")).unwrap();
}
