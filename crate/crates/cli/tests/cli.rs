use std::fs;
use std::process::{Command, Output};

fn balgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balgame"))
        .args(args)
        .env_remove("BALGAME_WINDOW_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn threshold_n8() {
    let o = balgame(&["threshold", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("M_crit = 47"));
}

#[test]
fn threshold_json_and_verify() {
    let o = balgame(&["--json", "threshold", "--n", "2", "--n", "4", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[1]["threshold"]["m_crit"], 3);
    assert_eq!(v[1]["cross_validation"]["agrees"], true);
}

#[test]
fn large_verify_needs_opt_in() {
    let o = balgame(&["threshold", "--n", "6", "--verify"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn middle_signs_verify() {
    let o = balgame(&["signs", "--middle", "6", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let table = balgame::io::parse_sign_table(&text).unwrap();
    assert_eq!(table.rows.len(), 10);
    assert!(table.signed_sum().unwrap().is_zero());
    assert!(text.contains("reference table n = 6"));
}

#[test]
fn fixtures_and_odd_together() {
    let o = balgame(&["signs", "--odd", "5", "--verify", "--verify-fixtures"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# sum = (6,6,6,6,6)"));
    assert_eq!(stdout(&o).matches("-> ok").count(), 5);
}

#[test]
fn signs_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.txt");
    let o = balgame(&["signs", "--middle", "4", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let t = balgame::io::parse_sign_table(&fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(t.signed_sum().unwrap(), balgame::LatticeVector::new(vec![3, -1, -1, -1]));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(balgame(&["signs", "--middle", "5"]).status.code(), Some(2));
    assert_eq!(balgame(&["threshold", "--n", "1"]).status.code(), Some(2));
    assert_eq!(balgame(&["nonsense"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    fs::write(&f, "dim 2\n1,1\n1,-1\n").unwrap();
    let o = balgame(&["maximal", "--family", f.to_str().unwrap(), "--window", "-3:3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = balgame(&["maximal", "--family", f.to_str().unwrap(), "--window", "a:3,0:1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_survives_and_is_deterministic() {
    let args = ["--json", "simulate", "--n", "4", "--M", "3", "--pusher", "random", "--rounds", "10000", "--seed", "9"];
    let a = balgame(&args);
    let b = balgame(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["outcome"]["kind"], "survived");
    assert!(v["max_coordinate"].as_i64().unwrap() <= 3);
}

#[test]
fn rank_pusher_below_threshold() {
    let o = balgame(&["simulate", "--n", "3", "--M", "0", "--pusher", "rank", "--chooser", "greedy"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("escaped K_0"));
    let o = balgame(&["simulate", "--n", "3", "--M", "1", "--pusher", "rank"]);
    assert!(stdout(&o).contains("no winning offer"));
}

#[test]
fn coloring_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.txt");
    let o = balgame(&["coloring", "--m", "3", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("defect class: balanced"));
    let o = balgame(&["--json", "coloring", "--check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // Repaint one set so it matches its complement.
    let text = fs::read_to_string(&p).unwrap();
    let flipped = if text.contains("4,5,6 B") {
        text.replacen("4,5,6 B", "4,5,6 R", 1)
    } else {
        text.replacen("4,5,6 R", "4,5,6 B", 1)
    };
    fs::write(&p, flipped).unwrap();
    let o = balgame(&["--json", "coloring", "--check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"error\""));
}

#[test]
fn witness_certificates_replay() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    let s = dir.path().join("s.txt");
    let c = dir.path().join("c.json");
    fs::write(&f, "dim 2\n11\n10\n").unwrap();
    let o = balgame(&["maximal", "--family", f.to_str().unwrap(), "--window", "-2:2,-2:2", "--dump", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = balgame(&["witness", "--family", f.to_str().unwrap(), "--set", s.to_str().unwrap(), "--out", c.to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("all witnesses verified"));
    let o = balgame(&["witness", "--check", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let tampered = fs::read_to_string(&c).unwrap().replacen("\"verified\": true", "\"verified\": false", 1);
    fs::write(&c, tampered).unwrap();
    assert_eq!(balgame(&["witness", "--check", c.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn witness_rejects_open_set() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    let s = dir.path().join("s.txt");
    fs::write(&f, "dim 2\n11\n10\n").unwrap();
    fs::write(&s, "0,0\n1,1\n").unwrap();
    let o = balgame(&["witness", "--family", f.to_str().unwrap(), "--set", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn maximal_dump() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    let d = dir.path().join("safe.txt");
    fs::write(&f, "dim 2\n1,1\n1,-1\n").unwrap();
    let o = balgame(&["maximal", "--family", f.to_str().unwrap(), "--window", "-4:1,-4:1", "--dump", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("table check: ok"));
    let safe = balgame::io::parse_point_set(&fs::read_to_string(&d).unwrap(), Some(2)).unwrap();
    let fam = balgame::io::parse_family(&fs::read_to_string(&f).unwrap(), "f").unwrap();
    assert!(balgame::game::is_vclosed(&safe, &fam).is_ok() || safe.is_empty());
}

#[test]
fn window_budget_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_balgame"))
        .args(["threshold", "--n", "4", "--verify"])
        .env("BALGAME_WINDOW_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("volume"));
}

#[test]
fn play_through_pipe() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_balgame"))
        .args(["play", "--n", "3", "--M", "0", "--human", "chooser", "--rounds", "5"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"+\n+\n+\n+\n+\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("winning Pusher strategy"));
    assert!(text.contains("Pusher wins"));
}

#[test]
fn translate_json() {
    let o = balgame(&["--json", "translate", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["m"], 3);
    assert_eq!(v["translate"], serde_json::json!([-7, -1, -1, -1]));
}
