//! End-to-end runs of the binary against the bundled corpus.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_freelip"))
}

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

#[test]
fn comb_audit_on_bundled_z2() {
    let out = tempfile::tempdir().unwrap();
    let result = bin()
        .args(["--out", out.path().to_str().unwrap(), "comb-audit", "--radius", "5", "--config"])
        .arg(data("groups/z2.json"))
        .output()
        .unwrap();
    assert!(result.status.success(), "{result:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("comb_audit.json")).unwrap())
            .unwrap();
    assert_eq!(report["report"]["max_divergence_min_index"], 2);
    assert_eq!(report["scalar"], "rational");
    assert!(report["version"].is_string());
}

#[test]
fn norm_prints_the_value() {
    let out = tempfile::tempdir().unwrap();
    let result = bin()
        .args(["--out", out.path().to_str().unwrap(), "norm", "--config"])
        .arg(data("molecules/threepoint.json"))
        .output()
        .unwrap();
    assert!(result.status.success());
    assert_eq!(String::from_utf8_lossy(&result.stdout).trim(), "2");
}

#[test]
fn basis_audit_passes_on_bundled_f2() {
    let out = tempfile::tempdir().unwrap();
    let result = bin()
        .args(["--out", out.path().to_str().unwrap(), "basis-audit", "--radius", "4", "--config"])
        .arg(data("groups/f2.json"))
        .output()
        .unwrap();
    assert!(result.status.success(), "{result:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("basis_audit.json")).unwrap())
            .unwrap();
    assert_eq!(report["report"]["k_plus_1_bound_ok"], true);
    assert_eq!(report["report"]["case1_bound_ok"], true);
}

#[test]
fn quotient_and_tower_on_bundled_corpus() {
    let out = tempfile::tempdir().unwrap();
    for config in ["quotient/z4_mod_2.json", "quotient/d4_center.json", "quotient/s3_mod_a3.json"] {
        let result = bin()
            .args(["--out", out.path().to_str().unwrap(), "quotient-audit", "--config"])
            .arg(data(config))
            .output()
            .unwrap();
        assert!(result.status.success(), "{config}: {result:?}");
    }
    let result = bin()
        .args(["--out", out.path().to_str().unwrap(), "tower", "--config"])
        .arg(data("quotient/z8_tower.json"))
        .output()
        .unwrap();
    assert!(result.status.success(), "{result:?}");
}

#[test]
fn reports_are_deterministic_across_runs_and_thread_counts() {
    let out1 = tempfile::tempdir().unwrap();
    let out2 = tempfile::tempdir().unwrap();
    let run = |out: &Path, threads: &str| {
        let result = bin()
            .args([
                "--out",
                out.to_str().unwrap(),
                "--threads",
                threads,
                "--seed",
                "7",
                "net",
                "--dim",
                "2",
                "--count",
                "80",
                "--eps",
                "0.4",
            ])
            .output()
            .unwrap();
        assert!(result.status.success());
        std::fs::read(out.join("net.json")).unwrap()
    };
    let a = run(out1.path(), "1");
    let b = run(out2.path(), "4");
    assert_eq!(a, b);
}

#[test]
fn sphere_kernel_emits_csv() {
    let out = tempfile::tempdir().unwrap();
    let result = bin()
        .args([
            "--out",
            out.path().to_str().unwrap(),
            "--csv",
            "sphere-kernel",
            "--degree",
            "10",
        ])
        .output()
        .unwrap();
    assert!(result.status.success());
    let csv = std::fs::read_to_string(out.path().join("sphere_kernel.csv")).unwrap();
    assert!(csv.starts_with("degree,weighted_l1_norm,min_value"));
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn bad_config_exits_with_usage_error() {
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("broken.json");
    std::fs::write(&cfg, "{ not json").unwrap();
    let result = bin()
        .args(["--out", out.path().to_str().unwrap(), "comb-audit", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(2));

    let missing = bin()
        .args(["--out", out.path().to_str().unwrap(), "norm", "--config", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn violated_bound_exits_one() {
    // An unreachable convergence target makes the audited bound fail without
    // any operational error.
    let out = tempfile::tempdir().unwrap();
    let result = bin()
        .args([
            "--out",
            out.path().to_str().unwrap(),
            "fejer",
            "--grid",
            "512",
            "--degree",
            "64",
            "--target",
            "1e-9",
        ])
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(1), "{result:?}");
    assert!(String::from_utf8_lossy(&result.stderr).contains("BOUND FAILED"));
}
