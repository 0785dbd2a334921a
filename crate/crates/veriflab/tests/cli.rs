use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pgv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgv")).args(args).output().expect("pgv runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pgv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&pgv(&["--help"])), 0);
    assert_eq!(code(&pgv(&["bogus"])), 1);
    assert_eq!(code(&pgv(&["h1", "--group", "NoSuchGroup"])), 1);
    assert_eq!(code(&pgv(&["find-noninner", "--group", "C4"])), 1);
    assert_eq!(code(&pgv(&["check", "--id", "no_such_check", "--catalog", "order<=4"])), 1);
    assert_eq!(code(&pgv(&["check", "--id", "all", "--catalog", "order<<4"])), 1);
    assert_eq!(code(&pgv(&["h1", "--group", "D8", "--normal", "4"])), 1);
}

#[test]
fn catalog_and_group_info() {
    let out = pgv(&["catalog", "list", "--filter", "order=8"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["D8", "Q8", "C8"] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name} missing");
    }
    let info = json(&pgv(&["group", "info", "Q8"]));
    assert_eq!(info["order"], 8);
    assert_eq!(info["center_order"], 2);
    assert_eq!(info["abelian"], false);
}

#[test]
fn cohomology_commands() {
    let h1 = json(&pgv(&["h1", "--group", "D8", "--normal", "center", "--module", "omega1-center"]));
    assert_eq!(h1["quotient_order"], 4);
    assert_eq!(h1["h_dim"], 2);
    let h2 = json(&pgv(&["h2", "--group", "C2", "--module", "trivial"]));
    assert_eq!(h2["h_dim"], 1);
    let free = json(&pgv(&["h1", "--group", "Q8", "--module", "free:2"]));
    assert_eq!(free["h_dim"], 0);
}

#[test]
fn extend_builds_groups_of_the_right_order() {
    let e = json(&pgv(&["--seed", "3", "extend", "--group", "C2xC2", "--kernel", "2"]));
    assert_eq!(e["order"], 16);
    let j = json(&pgv(&["extend", "--group", "C4", "--kernel", "2,jordan"]));
    assert_eq!(j["order"], 16);
    assert_eq!(code(&pgv(&["extend", "--group", "C4", "--kernel", "3,jordan"])), 1);
}

#[test]
fn certificates_round_trip_through_files() {
    let cert = scratch("heis.json");
    let c = cert.to_str().unwrap();
    assert_eq!(code(&pgv(&["find-noninner", "--group", "Heis27", "--out", c])), 0);
    let ok = pgv(&["verify", "--group", "Heis27", "--cert", c]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["ok"], true);
    assert_eq!(code(&pgv(&["verify", "--group", "Heis125", "--cert", c])), 1);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let n = v["map"].as_array().unwrap().len();
    v["map"] = Value::Array((0..n).map(Value::from).collect());
    let tampered = scratch("tampered.json");
    std::fs::write(&tampered, v.to_string()).unwrap();
    assert_eq!(code(&pgv(&["verify", "--group", "Heis27", "--cert", tampered.to_str().unwrap()])), 1);

    assert_eq!(code(&pgv(&["verify", "--group", "Heis27", "--cert", scratch("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn descent_mode_gives_a_certificate_or_a_diagnostic() {
    let d16 = pgv(&["find-noninner", "--group", "D16", "--mode", "paper"]);
    assert_eq!(code(&d16), 0);
    assert_eq!(json(&d16)["provenance"]["mode"], "paper");
    let d8 = pgv(&["find-noninner", "--group", "D8", "--mode", "paper"]);
    assert_eq!(code(&d8), 0);
    let v = json(&d8);
    assert_eq!(v["kind"], "diagnostic");
    assert!(v["step"].is_string() && v["reason"].is_string());
}

#[test]
fn check_reports_are_reproducible_and_counterexamples_keep_exit_zero() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    for path in [&a, &b] {
        let out = pgv(&[
            "check",
            "--id",
            "extension_h1_growth_rank_t",
            "--catalog",
            "C4",
            "--t",
            "1",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let ra = std::fs::read(&a).unwrap();
    assert_eq!(ra, std::fs::read(&b).unwrap());
    let report: Value = serde_json::from_slice(&ra).unwrap();
    assert!(report["totals"]["COUNTEREXAMPLE"].as_u64().unwrap_or(0) >= 1);
}
