use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpm")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn generate(dir: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut args = vec!["generate", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = gpm(&args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn single_vertex_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "one.jsonl", &["--m", "2", "--delta", "1", "--p", "0.5", "--n", "1"]);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[2], r#"{"src":1,"slot":1,"dst":1}"#);
    assert_eq!(lines[3], r#"{"src":1,"slot":2,"dst":1}"#);

    let report = stdout_json(&gpm(&["stats", path.to_str().unwrap()]));
    assert_eq!(report["triangles_slots"], 0);
    assert_eq!(report["max_degree"], 4);
    assert_eq!(report["connected"], true);
    assert_eq!(report["diameter"], 0);
}

#[test]
fn same_flags_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let flags = ["--m", "3", "--delta", "0.5", "--p", "0.2", "--n", "2000", "--seed", "11"];
    let a = std::fs::read(generate(dir.path(), "a.jsonl", &flags)).unwrap();
    let b = std::fs::read(generate(dir.path(), "b.jsonl", &flags)).unwrap();
    assert_eq!(a, b);
    let c = std::fs::read(generate(dir.path(), "c.jsonl", &[&flags[..9], &["12"]].concat())).unwrap();
    assert_ne!(a, c);

    let path = dir.path().join("a.jsonl");
    let first = gpm(&["stats", path.to_str().unwrap()]);
    let second = gpm(&["stats", path.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
    let report = stdout_json(&first);
    assert_eq!(report["n"], 2000);
    assert_eq!(report["edges"], 6000);
    assert!(report["l_rows"].as_u64().unwrap() > 0);
}

#[test]
fn generate_to_stdout_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let flags = ["--m", "2", "--delta", "1", "--p", "0.3", "--n", "300", "--seed", "4"];
    let file = std::fs::read(generate(dir.path(), "g.jsonl", &flags)).unwrap();
    let out = gpm(&[&["generate", "--out", "-"], &flags[..]].concat());
    assert!(out.status.success());
    assert_eq!(out.stdout, file);
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["edges"], 600);
}

#[test]
fn kernel_table_flag() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("kernel.txt");
    std::fs::write(&table, "# distance weight\n0 1\n0.2 0.5\n0.4 0\n").unwrap();
    let kernel = format!("table:{}", table.display());
    let path =
        generate(dir.path(), "k.jsonl", &["--m", "2", "--delta", "1", "--p", "0.1", "--n", "500", "--kernel", &kernel]);
    let report = stdout_json(&gpm(&["stats", path.to_str().unwrap(), "--skip-diameter"]));
    assert_eq!(report["n"], 500);
    assert!(report["diameter"].is_null());

    std::fs::write(&table, "0 2\n").unwrap();
    let out =
        gpm(&["generate", "--m", "2", "--delta", "1", "--p", "0.1", "--n", "5", "--out", "-", "--kernel", &kernel]);
    assert_eq!(out.status.code(), Some(1));
    let out =
        gpm(&["generate", "--m", "2", "--delta", "1", "--p", "0.1", "--n", "5", "--out", "-", "--kernel", "gauss"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn predict_triangle_slope() {
    let out = gpm(&["predict", "--m", "2", "--delta", "1", "--p", "1", "--fp", "1"]);
    let json = stdout_json(&out);
    let slope = json["predictions"].as_array().unwrap().iter().find(|p| p["name"] == "triangle_slope").unwrap()
        ["value"]
        .as_f64()
        .unwrap();
    assert!((slope - 40.0 / 3.0).abs() < 1e-12);
    let with_n =
        stdout_json(&gpm(&["predict", "--m", "2", "--delta", "1", "--p", "0.3", "--fp", "0.6", "--n", "1000"]));
    assert!(with_n["predictions"].as_array().unwrap().iter().any(|p| p["name"] == "connectivity_scale"));
}

#[test]
fn fp_estimates() {
    let full = stdout_json(&gpm(&["fp", "--d", "2", "--p", "1", "--samples", "1000"]));
    assert_eq!(full["mean"].as_f64().unwrap(), 1.0);
    assert_eq!(full["stderr"].as_f64().unwrap(), 0.0);

    // Flat limit: the mean normalized overlap of two unit disks at a
    // uniform offset within the unit disk, 1 - 3 sqrt(3) / (4 pi).
    let flat = 1.0 - 3.0 * 3f64.sqrt() / (4.0 * std::f64::consts::PI);
    let small = stdout_json(&gpm(&["fp", "--d", "2", "--p", "0.001", "--samples", "200000", "--seed", "3"]));
    let (mean, se) = (small["mean"].as_f64().unwrap(), small["stderr"].as_f64().unwrap());
    assert!((mean - flat).abs() < 3.0 * se + 1e-3, "{mean} +- {se} vs {flat}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gpm(&[]).status.code(), Some(2));
    assert_eq!(gpm(&["generate", "--m", "2"]).status.code(), Some(2));
    assert_eq!(
        gpm(&["generate", "--m", "2", "--delta", "1", "--p", "0.5", "--n", "3", "--out", "-", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gpm(&["generate", "--m", "2", "--delta", "-1", "--p", "0.5", "--n", "3", "--out", "-"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gpm(&["generate", "--m", "2", "--delta", "1", "--p", "1.5", "--n", "3", "--out", "-"]).status.code(),
        Some(2)
    );
    assert_eq!(gpm(&["fp", "--p", "0"]).status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path =
        generate(dir.path(), "g.jsonl", &["--m", "1", "--delta", "1", "--p", "0.5", "--n", "4", "--trace-stride", "0"]);
    let mut lines: Vec<String> = std::fs::read_to_string(&path).unwrap().lines().map(String::from).collect();
    lines[6] = r#"{"src":2,"slot":1,"dst":9}"#.into();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, lines.join("\n")).unwrap();
    let out = gpm(&["stats", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 7"));

    assert_eq!(gpm(&["stats", dir.path().join("missing").to_str().unwrap()]).status.code(), Some(1));
    let out =
        gpm(&["generate", "--m", "1", "--delta", "1", "--p", "0.5", "--n", "4", "--out", "/nonexistent/dir/g.jsonl"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn experiment_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        "kind = \"triangles\"\nmaster_seed = 3\nreplicas = 4\nn = [100, 200, 400]\n\n[grid]\nm = [2]\ndelta = [1.0]\np = [1.0, 0.3]\n",
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_gpm"))
        .args(["experiment", "--config", config.to_str().unwrap(), "--out", csv.to_str().unwrap()])
        .env("GPM_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# gpm-results format_version=1 config_sha256="));
    assert_eq!(text.lines().count(), 2 + 2 * 3 * 4);

    let jsonl = gpm(&["experiment", "--config", config.to_str().unwrap(), "--format", "jsonl", "--threads", "1"]);
    assert!(jsonl.status.success());
    let lines: Vec<Value> =
        String::from_utf8(jsonl.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1 + 24);
    assert_eq!(lines[0]["format_version"], 1);
    assert_eq!(lines[1]["kind"], "triangles");

    std::fs::write(&config, "kind = \"triangles\"\nreplicas = 0\n").unwrap();
    assert_eq!(gpm(&["experiment", "--config", config.to_str().unwrap()]).status.code(), Some(1));
}

/// A single large run lands inside the spread of a 100-replica pilot
/// (mean 7.79, sd 1.06 for T_n / ln n at n = 1e5); T_n / ln n approaches
/// 40/3 only slowly because of the negative intercept.
#[test]
fn large_pam_run_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let flags = ["--p", "1", "--delta", "1", "--m", "2", "--n", "100000", "--seed", "7", "--trace-stride", "0"];
    let path = generate(dir.path(), "big.jsonl", &flags);
    let report = stdout_json(&gpm(&["stats", path.to_str().unwrap(), "--skip-diameter", "--skip-histogram"]));
    let t = report["triangles_slots"].as_f64().unwrap() / 1e5f64.ln();
    assert!((7.79 - 4.0 * 1.06..=7.79 + 4.0 * 1.06).contains(&t), "T_n / ln n = {t}");
    assert!(t < 40.0 / 3.0);
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            gpm::ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            count += 1;
        }
    }
    assert_eq!(count, 6);
}
