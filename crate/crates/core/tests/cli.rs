//! End-to-end checks of the monoflow binary surface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monoflow"))
}

fn temp_dir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("monoflow-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn run_preset_then_plot_from_csv() {
    let dir = temp_dir("run");
    let out = bin()
        .args(["run", "--preset", "cl-convergence", "--out"])
        .arg(&dir)
        .output()
        .expect("spawn");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("certificate exponential_formula: pass"), "{stdout}");

    let csv = dir.join("cl-convergence.csv");
    assert!(csv.exists());
    assert!(dir.join("cl-convergence.json").exists());

    let svg_out = dir.join("replot.svg");
    let out = bin()
        .args(["plot", "--csv"])
        .arg(&csv)
        .args(["--x", "time", "--y", "x0", "--log-y", "--out"])
        .arg(&svg_out)
        .output()
        .expect("spawn");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(&svg_out).unwrap();
    assert!(svg.contains("<svg") && svg.contains("polyline"));

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn run_from_config_file_with_seed_override() {
    let dir = temp_dir("cfg");
    std::fs::create_dir_all(&dir).unwrap();
    let config = r#"
seed = 1

[operator]
kind = "quadratic"
q = [[1.0, 0.0], [0.0, 1.0]]

[scheme]
kind = "proximal"

[schedule]
kind = "constant"
c = 0.5

[horizon]
n_steps = 120

[start]
preset = "unit_x"

[[certificates]]
name = "velocity"
"#;
    let path = dir.join("tiny-exp.toml");
    std::fs::write(&path, config).unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&path)
        .args(["--out"])
        .arg(&dir)
        .args(["--seed", "9"])
        .output()
        .expect("spawn");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // run name comes from the file stem
    assert!(dir.join("tiny-exp.csv").exists());
    let report = std::fs::read_to_string(dir.join("tiny-exp.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(parsed["seed"], serde_json::json!(9));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn unknown_preset_lists_available_names() {
    let dir = temp_dir("nopreset");
    let out = bin()
        .args(["run", "--preset", "nonsense", "--out"])
        .arg(&dir)
        .output()
        .expect("spawn");
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("rotation-average"), "{stderr}");
}

#[test]
fn unknown_suite_name_is_a_usage_error() {
    let out = bin().args(["check", "--suite", "medium"]).output().expect("spawn");
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("fast") && stderr.contains("full"), "{stderr}");
}

#[test]
fn plot_unknown_column_fails_cleanly() {
    let dir = temp_dir("plotcol");
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("tiny.csv");
    std::fs::write(&csv, "time,x0\n0.0,1.0\n1.0,0.5\n").unwrap();
    let out = bin()
        .args(["plot", "--csv"])
        .arg(&csv)
        .args(["--x", "time", "--y", "energy", "--out"])
        .arg(dir.join("x.svg"))
        .output()
        .expect("spawn");
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("energy"));
    let _ = std::fs::remove_dir_all(&dir);
}
