use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qgpkp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgpkp"))
        .args(args)
        .current_dir(dir)
        .env_remove("SOURCE_DATE_EPOCH")
        .env_remove("QGPKP_OUT_DIR")
        .output()
        .unwrap()
}

/// Header and numeric rows of a CSV written by the tool.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], row: &[f64], name: &str) -> f64 {
    row[header.iter().position(|h| h == name).unwrap()]
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(qgpkp(&["no-such-command"], p).status.code(), Some(2));
    assert_eq!(
        qgpkp(&["coefficients", "--set", "nope.key=1"], p)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qgpkp(&["coefficients", "--set", "physics.g"], p)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qgpkp(&["figure", "5"], p).status.code(), Some(2));
    assert_eq!(
        qgpkp(&["coefficients", "--set", "physics.g=-1"], p)
            .status
            .code(),
        Some(1)
    );

    let out = qgpkp(&["soliton-eval", "--set", "cyl.u=0.5"], p);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("margin"));

    let out = qgpkp(
        &["verify-residual", "--set", "residual.equation=kp_cart"],
        p,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(qgpkp(&["--help"], p).status.success());
}

#[test]
fn output_directory_precedence() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let run = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qgpkp"));
        c.arg("eos-table")
            .args(extra)
            .current_dir(p)
            .env_remove("QGPKP_OUT_DIR");
        if let Some(e) = env {
            c.env("QGPKP_OUT_DIR", e);
        }
        assert!(c.status().unwrap().success());
    };
    run(&["--set", "output.dir=from_config"], None);
    assert!(p.join("from_config/eos_table.csv").exists());
    run(&["--set", "output.dir=from_config"], Some("from_env"));
    assert!(p.join("from_env/eos_table.csv").exists());
    run(
        &["--out", "from_flag", "--set", "output.dir=from_config"],
        Some("from_env"),
    );
    assert!(p.join("from_flag/eos_table.csv").exists());
    run(&[], None);
    assert!(p.join("out/eos_table.csv").exists());
}

#[test]
fn config_file_and_overrides() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    std::fs::write(
        p.join("run.toml"),
        "# medium\n[physics]\ng = 0.5\n\n[eos]\nn = 4\n",
    )
    .unwrap();
    let out = qgpkp(
        &["print-config", "--config", "run.toml", "--set", "eos.n=7"],
        p,
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("g = 0.5\n"));
    assert!(text.contains("n = 7\n"));

    assert!(
        qgpkp(&["eos-table", "--config", "run.toml", "--out", "o"], p)
            .status
            .success()
    );
    let (_, rows) = read_csv(&p.join("o/eos_table.csv"));
    assert_eq!(rows.len(), 4);

    std::fs::write(p.join("bad.toml"), "[physics]\nmass = 3\n").unwrap();
    let out = qgpkp(&["eos-table", "--config", "bad.toml"], p);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn single_cell_sweep_matches_coefficients() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let out = qgpkp(&["coefficients", "--out", "c"], p);
    assert!(out.status.success());
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    let coef = &json["coefficients"];
    assert!(qgpkp(&["sweep", "--set", "sweep.g=1.15", "--out", "s"], p)
        .status
        .success());
    let (header, rows) = read_csv(&p.join("s/sweep.csv"));
    assert_eq!(rows.len(), 1);
    for name in ["a_const", "cs", "cs2", "alpha", "beta", "m_eff"] {
        let a = column(&header, &rows[0], name);
        let b = coef[name].as_f64().unwrap();
        assert!((a - b).abs() <= 1e-11 * b.abs(), "{name}: {a} vs {b}");
    }
}

#[test]
fn sweep_row_matches_direct_call() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert!(qgpkp(&["sweep", "--out", "s"], p).status.success());
    assert!(
        qgpkp(&["coefficients", "--set", "physics.g=0", "--out", "c"], p)
            .status
            .success()
    );
    let (header, rows) = read_csv(&p.join("s/sweep.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(column(&header, &rows[0], "g"), 0.0);
    let json: Value =
        serde_json::from_str(&std::fs::read_to_string(p.join("c/coefficients.json")).unwrap())
            .unwrap();
    for name in ["cs", "cs2", "alpha", "beta"] {
        let a = column(&header, &rows[0], name);
        let b = json["summary"][name].as_f64().unwrap();
        assert!(
            (a - b).abs() <= 1e-11 * b.abs().max(1e-300),
            "{name}: {a} vs {b}"
        );
    }
    assert_eq!(column(&header, &rows[0], "beta"), 0.0);
}

#[test]
fn figure_two_tables() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert!(qgpkp(&["figure", "2", "--out", "f"], p).status.success());
    for t in ["18", "28"] {
        let (header, rows) = read_csv(&p.join(format!("f/fig2_rz_t{t}.csv")));
        assert_eq!(header, ["r", "z", "rho1"]);
        let z_max = rows.iter().map(|r| r[1]).fold(f64::MIN, f64::max);
        let z_min = rows.iter().map(|r| r[1]).fold(f64::MAX, f64::min);
        assert_eq!((z_min, z_max), (0.0, 30.0));
        assert!(rows.iter().all(|r| r[2] >= 0.0 && r[2] < 1.0));
    }
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(p.join("f/figure2.json")).unwrap()).unwrap();
    assert_eq!(manifest["tables"].as_array().unwrap().len(), 4);
}

#[test]
fn timestamp_only_from_source_date_epoch() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let status = Command::new(env!("CARGO_BIN_EXE_qgpkp"))
        .args(["eos-table", "--out", "t"])
        .current_dir(p)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(p.join("t/eos_table.csv")).unwrap();
    assert!(text.lines().next().unwrap().contains("timestamp="));
    assert!(qgpkp(&["eos-table", "--out", "u"], p).status.success());
    let text = std::fs::read_to_string(p.join("u/eos_table.csv")).unwrap();
    assert!(!text.contains("timestamp="));
}
