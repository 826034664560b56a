use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use psic_core::coloring::{verify, ColoringFile};

fn psic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psic")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bounds_matches_golden_file() {
    let out = psic(&["bounds", "8", "31"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = fs::read_to_string(fixture("bounds_8_31.csv")).unwrap();
    assert_eq!(stdout(&out), golden);
}

#[test]
fn bounds_rejects_bad_range() {
    assert_eq!(psic(&["bounds", "9", "8"]).status.code(), Some(2));
    assert_eq!(psic(&["bounds", "1", "5"]).status.code(), Some(2));
    assert_eq!(psic(&["bounds", "x", "5"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let ok = psic(&["verify", fixture("k4_complete.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("verdict: VALID"));

    let bad = psic(&["verify", fixture("k4_uncovered_pair.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(text.contains("uncovered pairs (1): (1,2)"), "{text}");
    assert!(text.contains("verdict: INVALID"));

    for name in ["truncated.json", "out_of_palette.json"] {
        let o = psic(&["verify", fixture(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(psic(&["verify", "/definitely/not/here.json"]).status.code(), Some(3));
    assert_eq!(psic(&["verify"]).status.code(), Some(2));
}

#[test]
fn oracle_reports_value_and_witness() {
    let out = psic(&["oracle", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "complete");
    assert_eq!(v["psi_c"], 6);
    let witness: ColoringFile = serde_json::from_value(v["witness"].clone()).unwrap();
    let report = verify(&witness.coloring().unwrap());
    assert!(report.is_valid());
    assert_eq!(report.color_count(), 6);
}

#[test]
fn oracle_budget_exhaustion_is_reported() {
    let out = psic(&["oracle", "6", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "incomplete");
    assert!(v["psi_c"].is_null());
    assert!(v["witness"].is_null());
    assert_eq!(psic(&["oracle", "9"]).status.code(), Some(2));
    assert_eq!(psic(&["oracle", "6"]).status.code(), Some(2));
}

#[test]
fn export_formats() {
    let file = fixture("k4_complete.json");
    let dot = psic(&["export", file.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(dot.status.code(), Some(0));
    let text = stdout(&dot);
    assert!(text.starts_with("graph"));
    assert_eq!(text.matches(" -- ").count(), 6);

    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("k4.txt");
    let classes = psic(&["export", file.to_str().unwrap(), "--format", "classes", "-o", target.to_str().unwrap()]);
    assert_eq!(classes.status.code(), Some(0));
    let text = fs::read_to_string(target).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("color")).count(), 4);

    assert_eq!(psic(&["export", file.to_str().unwrap(), "--format", "png"]).status.code(), Some(2));
}

#[test]
fn solve_writes_verified_solution_and_history() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("k5.toml");
    fs::write(&config, "n = 5\nseeds = [3, 4]\nmax_generations = 300\noutput_dir = \"out\"\n").unwrap();
    let out = psic(&["solve", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let summary = fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    for seed in [3, 4] {
        let history = dir.path().join(format!("out/n5_p6_seed{seed}_history.csv"));
        assert!(fs::read_to_string(history).unwrap().starts_with("generation,"));
        let solution = dir.path().join(format!("out/n5_c6_seed{seed}.json"));
        let file = ColoringFile::from_json(&fs::read_to_string(solution).unwrap()).unwrap();
        assert_eq!(file.meta.as_ref().unwrap().seed, Some(seed));
        assert!(verify(&file.coloring().unwrap()).is_valid());
    }
}

#[test]
fn solve_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "n = 5\npopulation = 10\n").unwrap();
    assert_eq!(psic(&["solve", config.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&config, "n = 5\npalette_size = 11\n").unwrap();
    assert_eq!(psic(&["solve", config.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(psic(&["solve", dir.path().join("missing.toml").to_str().unwrap()]).status.code(), Some(3));
}
