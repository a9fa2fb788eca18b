use std::process::{Command, Output};

fn slabwidth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slabwidth")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exhaustive_lemmas_pass() {
    let o = slabwidth(&["lemmas", "--n", "2", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(',').nth(3) == Some("0")));
}

#[test]
fn sampled_lemmas_are_byte_identical() {
    let args = ["lemmas", "--n", "3", "--samples", "300", "--seed", "7"];
    let a = slabwidth(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let b = slabwidth(&seq);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(slabwidth(&["lemmas", "--bogus"]).status.code(), Some(2));
    assert_eq!(slabwidth(&["lemmas", "--n", "3", "--samples", "5"]).status.code(), Some(2));
    assert_eq!(slabwidth(&["build", "--t", "1", "--b", "1", "--n", "20", "--uniform", "1"]).status.code(), Some(2));
    assert_eq!(slabwidth(&["search", "--n", "3", "--heuristic"]).status.code(), Some(2));
}

#[test]
fn sampled_audit_rows() {
    let o = slabwidth(&["audit", "--n", "3", "--samples", "50", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("sample,n,x_size,lambda_x_doubled,bound_milli,tw_certified,pass,error")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r[3] == "18"));
}

#[test]
fn plane_audits() {
    let o = slabwidth(&["audit", "--n", "2", "--separator", "plane"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let cols: Vec<&str> = row.split(',').collect();
    assert!(cols[4].starts_with('-'));
    assert_eq!(cols[6], "true");

    let o = slabwidth(&["audit", "--n", "9", "--separator", "plane", "--certify-width", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert_eq!(row, "0,9,81,162,1121,true,true,");
}

#[test]
fn build_evidence_verifies() {
    let o = slabwidth(&["build", "--t", "0", "--b", "1", "--seed", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["check"]["valid"], true);

    let o = slabwidth(&["build", "--t", "1", "--b", "1", "--uniform", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["check"]["valid"], true);
    assert!(v["check"]["tw_lower"].as_i64().unwrap() >= 1 || v["outcome"]["branch"] == "blocked");
}

#[test]
fn override_below_schedule_is_inconclusive_or_verified() {
    let o = slabwidth(&["build", "--t", "1", "--b", "1", "--n", "8", "--seed", "2", "--override"]);
    assert!(matches!(o.status.code(), Some(0) | Some(3)));
}

#[test]
fn output_file_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.json");
    let o = slabwidth(&["search", "--n", "2", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["value"], 1);
    assert_eq!(slabwidth(&["search", "--n", "4"]).status.code(), Some(3));
}

#[test]
fn treewidth_of_small_grids() {
    let o = slabwidth(&["treewidth", "--grid", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().nth(1), Some("8,19,4,"));
    let o = slabwidth(&["treewidth", "--grid", "3", "--decide", "3"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("27,98,,tw > 3"));
}
