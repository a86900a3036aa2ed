//! Black-box tests of the `gmrd` binary: flag handling, config files,
//! deterministic output, and exit codes.

use std::fs;
use std::path::Path;
use std::process::Command;

fn gmrd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gmrd"))
}

#[test]
fn contours_writes_csv_with_schema_and_digest() {
    let dir = tempfile::tempdir().unwrap();
    let status = gmrd()
        .args(["contours", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.path().join("contours.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# schema=gmrd-contours-v1"));
    assert!(lines.next().unwrap().starts_with("# config_digest="));
    assert_eq!(
        lines.next().unwrap(),
        "family,fixed,d_s,d_x1,d_x2,outer,region"
    );
}

#[test]
fn same_config_and_seed_regenerate_identical_bytes() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [dir_a.path(), dir_b.path()] {
        let status = gmrd()
            .args(["contours", "--seed", "7", "--out"])
            .arg(dir)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = fs::read(dir_a.path().join("contours.csv")).unwrap();
    let b = fs::read(dir_b.path().join("contours.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_changes_the_digest() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    run_contours(dir_a.path(), &["--seed", "1"]);
    run_contours(dir_b.path(), &["--seed", "2"]);
    let digest = |p: &Path| {
        fs::read_to_string(p.join("contours.csv"))
            .unwrap()
            .lines()
            .nth(1)
            .unwrap()
            .to_string()
    };
    assert_ne!(digest(dir_a.path()), digest(dir_b.path()));
}

fn run_contours(dir: &Path, extra: &[&str]) {
    let status = gmrd()
        .arg("contours")
        .args(extra)
        .arg("--out")
        .arg(dir)
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn config_file_overrides_grid() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    fs::write(
        &config,
        r#"
seed = 42

[contours]
fixed_d_s = [0.5]
fixed_d_x1 = [0.1]
d_x1 = { start = 0.05, stop = 0.5, points = 4 }
d_s = { start = 0.05, stop = 1.2, points = 4 }
"#,
    )
    .unwrap();
    let status = gmrd()
        .arg("contours")
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.path().join("contours.csv")).unwrap();
    // 1 slice x 4 points per family, plus 3 comment/header lines
    assert_eq!(text.lines().count(), 3 + 8);
}

#[test]
fn invalid_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "seed = \"not a number\"\n").unwrap();
    let out = gmrd()
        .arg("contours")
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn emit_svg_writes_figures() {
    let dir = tempfile::tempdir().unwrap();
    let status = gmrd()
        .args(["contours", "--emit-svg", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let svg = fs::read_to_string(dir.path().join("contours.svg")).unwrap();
    assert!(svg.contains("<svg"));
}

#[test]
fn thread_override_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let status = gmrd()
        .args(["contours", "--threads", "2", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
}
