use std::io::Write;
use std::process::{Command, Output, Stdio};

fn sgdiam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgdiam")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn distance_examples() {
    let o = sgdiam(&["distance", "--n", "10", "--k", "4", "--a", "1,3,5,7", "--b", "1,3,6,8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "3\n");
    let o = sgdiam(&["distance", "--n", "10", "--k", "4", "--a", "1,3,6,8", "--b", "1,4,6,9"]);
    assert_eq!(stdout(&o), "2\n");
    let o = sgdiam(&["distance", "--n", "10", "--k", "4", "--a", "1,3,6,8", "--b", "1,3,6,8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["distance"], 0);
}

#[test]
fn explain_emits_a_checkable_certificate() {
    let o = sgdiam(&[
        "distance",
        "--n",
        "12",
        "--k",
        "5",
        "--a",
        "1,3,5,7,10",
        "--b",
        "1,3,6,8,11",
        "--explain",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["decomposition"].is_object());
    let cert = serde_json::to_string(&v["certificate"]).unwrap();
    let dir = std::env::temp_dir().join(format!("sgdiam-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    std::fs::write(&path, cert).unwrap();
    let ok = sgdiam(&["verify-path", path.to_str().unwrap(), "--a", "1,3,5,7,10", "--b", "1,3,6,8,11"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let wrong = sgdiam(&["verify-path", path.to_str().unwrap(), "--a", "1,3,5,7,9", "--b", "1,3,6,8,11"]);
    assert_eq!(code(&wrong), 2);
}

#[test]
fn verify_path_reads_stdin_and_rejects_bad_paths() {
    let bad = r#"{"n":10,"k":4,"claimed_bound":2,"vertices":["1,3,5,7","1,3,6,8"]}"#;
    let mut child = Command::new(env!("CARGO_BIN_EXE_sgdiam"))
        .arg("verify-path")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(bad.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rejected"));
}

#[test]
fn trace_outside_the_lift_range_is_a_parameter_error() {
    let o = sgdiam(&["distance", "--n", "10", "--k", "4", "--a", "1,3,5,7", "--b", "1,3,6,8", "--trace"]);
    assert_eq!(code(&o), 3);
    let o = sgdiam(&["distance", "--n", "14", "--k", "6", "--a", "1,3,5,7,9,11", "--b", "1,3,6,8,10,12", "--trace"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("trace:"));
}

#[test]
fn enumerate_counts_and_empty_case() {
    let o = sgdiam(&["enumerate", "--n", "10", "--k", "4"]);
    assert_eq!(stdout(&o).lines().count(), 25);
    assert_eq!(stdout(&o).lines().next(), Some("1,3,5,7"));
    let o = sgdiam(&["enumerate", "--n", "5", "--k", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
}

#[test]
fn diameter_reports_bfs_and_formula() {
    let o = sgdiam(&["diameter", "--n", "11", "--k", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bfs"], 5);
    assert_eq!(v["agree"], true);
    let plain = sgdiam(&["diameter", "--n", "12", "--k", "5", "--no-orbit-reduction"]);
    assert_eq!(stdout(&plain).lines().next(), Some("4"));
}

#[test]
fn table_csv_and_out_file() {
    let dir = std::env::temp_dir().join(format!("sgdiam-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let o = sgdiam(&["table", "--k-max", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# sgdiam-table v1"));
    assert_eq!(lines.next(), Some("n,k,r,formula_lo,formula_hi,bfs,agree"));
    assert_eq!(lines.clone().count(), 2 + 4 + 6);
    assert!(lines.any(|l| l == "9,4,1,4,4,4,true"));
}

#[test]
fn witnesses() {
    let o = sgdiam(&["witness", "--n", "12", "--k", "5", "--kind", "lower4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1,3,5,7,10\n1,3,6,8,11\n");
    let d = sgdiam(&["distance", "--n", "12", "--k", "5", "--a", "1,3,5,7,10", "--b", "1,3,6,8,11"]);
    assert_eq!(stdout(&d), "4\n");
    let o = sgdiam(&["witness", "--n", "13", "--k", "5", "--kind", "lower4"]);
    assert_eq!(code(&o), 3);
    let o = sgdiam(&["witness", "--n", "14", "--k", "5", "--kind", "dist3"]);
    assert!(stdout(&o).starts_with("1,4,6,8,10\n1,5,7,9,11\n"));
}

#[test]
fn suites_pass_on_small_graphs() {
    let o = sgdiam(&["verify", "--suite", "blocks", "--k-max", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("blocks: pass"));
}

#[test]
fn scan_is_labelled_as_evidence() {
    let o = sgdiam(&["scan", "--k-max", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("not a proof"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&sgdiam(&[])), 1);
    assert_eq!(code(&sgdiam(&["frobnicate"])), 1);
    assert_eq!(code(&sgdiam(&["--help"])), 0);
    assert_eq!(code(&sgdiam(&["distance", "--n", "10", "--k", "4", "--a", "1,2,5,7", "--b", "1,3,6,8"])), 3);
    assert_eq!(code(&sgdiam(&["distance", "--n", "10", "--k", "4", "--a", "1,3,5,11", "--b", "1,3,6,8"])), 3);
    assert_eq!(code(&sgdiam(&["diameter", "--n", "70", "--k", "3"])), 3);
    assert_eq!(code(&sgdiam(&["verify-path", "/nonexistent/cert.json"])), 1);
}
