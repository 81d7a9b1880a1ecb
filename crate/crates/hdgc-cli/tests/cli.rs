//! End-to-end tests of the binary: flag handling, exit codes, file outputs,
//! and a golden JSON report.
//!
//! Regenerate the golden file after an intentional report change with
//! `UPDATE_GOLDEN=1 cargo test -p hdgc-cli`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hdgc"))
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(fixtures_dir())
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn help_exits_zero_for_every_subcommand() {
    for sub in ["simulate", "lagselect", "test", "network", "montecarlo"] {
        let out = bin().args([sub, "--help"]).output().unwrap();
        assert!(out.status.success(), "{sub} --help failed");
    }
    assert!(bin().arg("--help").output().unwrap().status.success());
}

#[test]
fn usage_error_exits_two() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // d beyond the supported augmentation order is flag misuse.
    let out = run(&[
        "test",
        "--data",
        "fixture5.csv",
        "--caused",
        "z1",
        "--causing",
        "z2",
        "--d",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_variable_exits_three_and_lists_names() {
    let out = run(&[
        "test",
        "--data",
        "fixture5.csv",
        "--caused",
        "zz",
        "--causing",
        "z1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(
        err.contains("zz") && err.contains("z1") && err.contains("z5"),
        "{err}"
    );
}

#[test]
fn missing_file_exits_three() {
    let out = run(&[
        "test",
        "--data",
        "no_such.csv",
        "--caused",
        "a",
        "--causing",
        "b",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn golden_json_report() {
    let out = run(&[
        "test",
        "--data",
        "fixture5.csv",
        "--caused",
        "z2",
        "--causing",
        "z1",
        "--p",
        "2",
        "--d",
        "2",
        "--variant",
        "lm-f",
        "--alpha",
        "0.05",
        "--intercept",
        "true",
        "--format",
        "json",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let got = stdout(&out);
    let golden_path = fixtures_dir().join("golden_test_report.json");
    if std::env::var("UPDATE_GOLDEN").is_ok() {
        std::fs::write(&golden_path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&golden_path).expect("golden file present");
    assert_eq!(got, want, "JSON report drifted from the golden file");
}

#[test]
fn stationary_label_with_d_zero() {
    let out = run(&[
        "test",
        "--data",
        "fixture5.csv",
        "--caused",
        "z2",
        "--causing",
        "z1",
        "--p",
        "2",
        "--d",
        "0",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PDS-LM (stationary)"));
}

#[test]
fn simulate_is_deterministic_and_reloadable() {
    let dir = std::env::temp_dir().join("hdgc_cli_sim_test");
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for path in [&a, &b] {
        let out = bin()
            .args([
                "simulate", "--dgp", "1", "--k", "4", "--t", "80", "--rho", "0.7", "--seed", "99",
                "--out",
            ])
            .arg(path)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // And the emitted panel feeds straight back into lagselect.
    let out = bin()
        .args(["lagselect", "--data"])
        .arg(&a)
        .args(["--pmax", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn network_writes_all_formats() {
    let dir = std::env::temp_dir().join("hdgc_cli_net_test");
    std::fs::create_dir_all(&dir).unwrap();
    for (format, name) in [
        ("csv", "edges.csv"),
        ("json", "edges.json"),
        ("dot", "edges.dot"),
    ] {
        let path = dir.join(name);
        let out = bin()
            .args(["network", "--data"])
            .arg(fixtures_dir().join("fixture5.csv"))
            .args([
                "--node",
                "z3",
                "--direction",
                "both",
                "--p",
                "1",
                "--d",
                "1",
                "--format",
                format,
                "--out",
            ])
            .arg(&path)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "format {format}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let content = std::fs::read_to_string(&path).unwrap();
        match format {
            "csv" => {
                assert!(content.starts_with("from,to,"));
                assert_eq!(content.lines().count(), 9); // header + 2*(5-1) edges
            }
            "json" => {
                let parsed: serde_json::Value = serde_json::from_str(&content).unwrap();
                assert_eq!(parsed.as_array().unwrap().len(), 8);
            }
            "dot" => {
                assert!(content.starts_with("digraph"));
                assert!(content.ends_with("}\n"));
            }
            _ => unreachable!(),
        }
    }
}

#[test]
fn fredmd_mode_loads_and_transforms() {
    // Raw levels by default.
    let out = run(&[
        "lagselect",
        "--data",
        "fredmd_small.csv",
        "--fredmd",
        "--pmax",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // Applying the stored codes shortens the sample by the two-row loss.
    let out = run(&[
        "lagselect",
        "--data",
        "fredmd_small.csv",
        "--fredmd",
        "--apply-tcodes",
        "--pmax",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn montecarlo_smoke_emits_tables() {
    let dir = std::env::temp_dir().join("hdgc_cli_mc_test");
    let _ = std::fs::remove_dir_all(&dir);
    let out = bin()
        .args([
            "montecarlo",
            "--dgp",
            "1",
            "--rho",
            "0",
            "--k",
            "4",
            "--t",
            "80",
            "--reps",
            "20",
            "--seed",
            "5",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("size_power.csv")).unwrap();
    assert!(csv.starts_with("dgp,rho,k,t,kind,"));
    assert_eq!(csv.lines().count(), 3); // header + size + power
    let table = std::fs::read_to_string(dir.join("size_power.txt")).unwrap();
    assert!(table.contains("size80") && table.contains("pow80"));

    // Same seed, same rates: the CSV is fully deterministic.
    let dir2 = std::env::temp_dir().join("hdgc_cli_mc_test2");
    let _ = std::fs::remove_dir_all(&dir2);
    let out = bin()
        .args([
            "montecarlo",
            "--dgp",
            "1",
            "--rho",
            "0",
            "--k",
            "4",
            "--t",
            "80",
            "--reps",
            "20",
            "--seed",
            "5",
            "--out",
        ])
        .arg(&dir2)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        csv,
        std::fs::read_to_string(dir2.join("size_power.csv")).unwrap()
    );
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = std::env::temp_dir().join("hdgc_cli_cfg_test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("defaults.toml");
    std::fs::write(&cfg, "[test]\nd = 0\nalpha = 0.1\n").unwrap();

    // File default d = 0 applies...
    let out = bin()
        .args(["--config"])
        .arg(&cfg)
        .args(["test", "--data"])
        .arg(fixtures_dir().join("fixture5.csv"))
        .args(["--caused", "z2", "--causing", "z1", "--p", "2"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("PDS-LM (stationary)"), "{text}");
    assert!(text.contains("alpha=0.1"), "{text}");

    // ...and the flag wins over the file.
    let out = bin()
        .args(["--config"])
        .arg(&cfg)
        .args(["test", "--data"])
        .arg(fixtures_dir().join("fixture5.csv"))
        .args(["--caused", "z2", "--causing", "z1", "--p", "2", "--d", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("PDS-LA-LM"));
}

#[test]
fn thread_cap_env_and_flag() {
    let out = bin()
        .env("HDGC_THREADS", "1")
        .args(["test", "--data"])
        .arg(fixtures_dir().join("fixture5.csv"))
        .args(["--caused", "z2", "--causing", "z1", "--p", "1", "--d", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args(["--threads", "1", "test", "--data"])
        .arg(fixtures_dir().join("fixture5.csv"))
        .args(["--caused", "z2", "--causing", "z1", "--p", "1", "--d", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
