use std::fs;
use std::process::Command;

fn census() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_census"));
    c.env_remove("CENSUS_SEED");
    c
}

#[test]
fn shape_prints_regular_volume() {
    let a = (std::f64::consts::PI / 9.0).to_string();
    let out = census().args(["shape", "--angles", &[a.as_str(); 6].join(",")]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: f64 = text.lines().find_map(|l| l.strip_prefix("volume: ")).unwrap().parse().unwrap();
    assert!((v - 10.428602 / 3.0).abs() < 1e-5, "{text}");
}

#[test]
fn seed_variable_is_rejected() {
    let out = census().env("CENSUS_SEED", "1").args(["run", "-n", "1", "-o", "unused"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn run_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = census().args(["run", "-n", "2", "-o"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["candidates.tri", "solutions.jsonl", "kojima.jsonl", "census.jsonl", "report.md", "unresolved.jsonl"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_eq!(fs::read_to_string(dir.path().join("census.jsonl")).unwrap().lines().count(), 8);
}

#[test]
fn stages_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = |f: &str| dir.path().join(f);
    assert!(census().args(["enumerate", "-n", "2", "-o"]).arg(p("c.tri")).status().unwrap().success());
    assert!(census().arg("solve").arg("-i").arg(p("c.tri")).arg("-o").arg(p("s.jsonl")).status().unwrap().success());
    assert!(census().arg("canonical").arg("-i").arg(p("s.jsonl")).arg("-o").arg(p("k.jsonl")).status().unwrap().success());
    let k = fs::read_to_string(p("k.jsonl")).unwrap();
    assert_eq!(k.lines().count(), fs::read_to_string(p("s.jsonl")).unwrap().lines().count());
    assert!(k.lines().all(|l| l.contains("\"converged\":true")));
}

#[test]
fn budget_exits_uncertified() {
    let dir = tempfile::tempdir().unwrap();
    let out = census().args(["run", "-n", "3", "--budget-nodes", "10", "-o"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(fs::read_to_string(dir.path().join("report.md")).unwrap().contains("UNCERTIFIED"));
}
