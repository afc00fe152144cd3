use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn radokit(dir: &tempfile::TempDir) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_radokit"));
    cmd.current_dir(dir.path())
        .env_remove("RADOKIT_BUDGET")
        .env_remove("RADOKIT_CACHE");
    cmd
}

fn run(args: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    radokit(&dir).args(args).arg("--no-cache").output().unwrap()
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = run(&[args, &["--json"]].concat());
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json {e}: {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), v)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_owned()
}

#[test]
fn canon() {
    let out = run(&["canon", "[3,0,0,-4,1,1]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "[3,-4,1]");
    assert_eq!(stdout(&run(&["canon", "[]"])), "[]");
    assert_eq!(stdout(&run(&["canon", "[2,0,2]"])), "[2]");

    let (code, v) = run_json(&["canon", "[3,0,0,-4,1,1]"]);
    assert_eq!(code, 0);
    assert_eq!(v["canonical"], json!(["3", "-4", "1"]));

    assert_eq!(run(&["canon", "[1,,2]"]).status.code(), Some(2));
}

#[test]
fn canon_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    std::fs::write(&path, "[2, 2, 0, 0, 7, 7, 3]\n").unwrap();
    let out = radokit(&dir)
        .args(["canon", "--no-cache", "--file"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "[2,7,3]");
}

#[test]
fn witness() {
    let (code, v) = run_json(&["witness", "3x1+x2+x3-x4-4x5=0", "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"], json!(["60", "48", "60", "80"]));
    assert_eq!(v["combination"], "60U (+) 48U (+) 60U (+) 80U");
    assert_eq!(
        v["verification"],
        json!({
            "sum_zero": true,
            "all_u_equivalent": true,
            "pairwise_distinct": true,
            "witness": ["60", "48", "60", "80"],
            "permutation": [0, 1, 2, 3, 4]
        })
    );

    let (_, v) = run_json(&["witness", "x+y-2z=0"]);
    assert_eq!(v["witness"], json!(["1", "2"]));

    let out = run(&["witness", "x+y-z=0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run(&["witness", "x+y-=0"]).status.code(), Some(2));
    assert!(stdout(&run(&["witness", "x+y-2z=0"])).starts_with("a = [1,2]"));
}

#[test]
fn family_and_verify() {
    let (_, v) = run_json(&["family", "x+y-2z=0"]);
    assert_eq!(v["family"], json!([["1", "2", "2"], ["1", "0", "2"], ["1", "1", "2"]]));
    assert_eq!(v["polynomials"], json!(["2X^2+2X+1", "2X^2+1", "2X^2+X+1"]));

    let (code, v) = run_json(&[
        "verify", "x+y-2z=0", "--target", "[1,2]", "--member", "[1,2,2]", "--member", "[1,0,2]",
        "--member", "[1,1,2]",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);

    let (_, v) = run_json(&[
        "verify", "x+y-2z=0", "--target", "[1,2]", "--member", "[1,2]", "--member", "[1,0,2]",
        "--member", "[1,1,2]",
    ]);
    assert_eq!(v["sum_zero"], false);
    assert_eq!(v["passed"], false);

    let (code, _) = run_json(&["verify", "x+y-2z=0", "--target", "[1,2]", "--member", "[1,2]"]);
    assert_eq!(code, 3);
}

#[test]
fn equal() {
    let (code, v) = run_json(&["equal", "2U (+) U", "2U (+) 2U (+) U"]);
    assert_eq!(code, 0);
    assert_eq!(v["equal"], true);
    assert_eq!(run_json(&["equal", "U", "U"]).1["equal"], true);
    let (_, v) = run_json(&["equal", "U (+) 2U", "2U (+) U"]);
    assert_eq!(v["equal"], false);
    assert_eq!(v["left"], "U (+) 2U");
    assert_eq!(run(&["equal", "2U (+) 3V", "U"]).status.code(), Some(3));
    assert_eq!(run(&["equal", "2U +", "U"]).status.code(), Some(2));
}

#[test]
fn solve() {
    let (_, v) = run_json(&["solve", "x+y-2z=0", "--set", "1,2,3", "--distinct"]);
    assert_eq!(v["solutions"], json!([[1, 3, 2], [3, 1, 2]]));
    let (_, v) = run_json(&["solve", "x+y-2z=0", "--max", "3", "--limit", "1"]);
    assert_eq!(v["solutions"], json!([[1, 1, 1]]));
}

#[test]
fn force() {
    let (code, v) = run_json(&["force", "x+y-2z=0", "--colors", "2", "--distinct", "--max", "12"]);
    assert_eq!(code, 0);
    assert_eq!(v["forced"], true);
    assert_eq!(v["n"], 9);
    assert_eq!(v["certificate"], "exhausted");

    let (_, v) = run_json(&["force", "x+y-2z=0", "--colors", "1", "--distinct", "--max", "12"]);
    assert_eq!(v["n"], 3);

    let (_, v) = run_json(&["force", "x+y-2z=0", "--colors", "2", "--distinct", "--max", "8"]);
    assert_eq!(v["forced"], false);
    assert_eq!(v["certificate"].as_array().unwrap().len(), 8);

    let (code, v) = run_json(&["force", "x+y-2z=0", "--colors", "3", "--distinct", "--max", "60", "--budget", "1000"]);
    assert_eq!(code, 4);
    assert!(v["partial"]["nodes"].as_u64().unwrap() >= 1000);
}

#[test]
fn budget_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = radokit(&dir)
        .args(["force", "x+y-2z=0", "--colors", "3", "--distinct", "--max", "60", "--no-cache"])
        .env("RADOKIT_BUDGET", "500")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sums() {
    let (_, v) = run_json(&["mtsums", "--ground", "1,2,4", "--coeffs", "1"]);
    assert_eq!(v["sums"], json!(["1", "2", "3", "4", "5", "6", "7"]));
    let (_, v) = run_json(&["mtsums", "--ground", "1,2,3", "--coeffs", "2,1"]);
    assert_eq!(v["sums"], json!(["4", "5", "7", "9"]));
    let (_, v) = run_json(&["mtsums", "--ground", "5", "--coeffs", "1,1"]);
    assert_eq!(v["sums"], json!([]));
    assert_eq!(stdout(&run(&["fs", "--ground", "1,2,4"])), "{1, 2, 3, 4, 5, 6, 7}");
    assert_eq!(run(&["fs", "--ground", "1,1"]).status.code(), Some(3));
}

#[test]
fn cache_replays_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["force", "x+y-z=0", "--colors", "2", "--distinct", "--max", "12", "--json"];
    let first = radokit(&dir).args(args).output().unwrap();
    let second = radokit(&dir).args(args).output().unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let cache = std::fs::read_to_string(dir.path().join(".radokit-cache.jsonl")).unwrap();
    assert_eq!(cache.lines().count(), 1);
    let record: Value = serde_json::from_str(cache.lines().next().unwrap()).unwrap();
    assert_eq!(record["command"], "force");
    assert_eq!(record["input_digest"].as_str().unwrap().len(), 64);
    assert!(record["wall_time_ms"].as_f64().is_some());

    // --no-cache neither reads nor writes
    let third = radokit(&dir).args(args).arg("--no-cache").output().unwrap();
    assert_eq!(third.status.code(), Some(0));
    let cache = std::fs::read_to_string(dir.path().join(".radokit-cache.jsonl")).unwrap();
    assert_eq!(cache.lines().count(), 1);
}

#[test]
fn batch_mode() {
    let dir = tempfile::tempdir().unwrap();
    let mut child = radokit(&dir)
        .args(["batch", "--no-cache"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let input = [
        r#"{"command":"canon","string":"[3,0,0,-4,1,1]"}"#,
        r#"{"command":"witness","equation":"3x1+x2+x3-x4-4x5=0"}"#,
        "",
        r#"{"command":"fs","ground":[1,2,4]}"#,
        r#"{"command":"witness","equation":"x+y-z=0"}"#,
        r#"{"command":"nope"}"#,
    ]
    .join("\n");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0]["result"]["canonical"], json!(["3", "-4", "1"]));
    assert_eq!(lines[1]["result"]["witness"], json!(["60", "48", "60", "80"]));
    assert_eq!(lines[2]["result"]["count"], 7);
    assert_eq!(lines[3]["ok"], false);
    assert_eq!(lines[3]["exit_code"], 3);
    assert_eq!(lines[4]["exit_code"], 2);
    assert_eq!(out.status.code(), Some(3));
}
