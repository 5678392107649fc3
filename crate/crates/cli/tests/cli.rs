use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn su11(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su11"))
        .current_dir(dir)
        .env_remove("SU11_OUT_DIR")
        .args(args)
        .output()
        .expect("run su11")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .parse()
        .unwrap()
}

#[test]
fn optimal_vacuum_sensitivity() {
    let dir = tempfile::tempdir().unwrap();
    let out = su11(dir.path(), &["sensitivity", "--input", "vacuum", "--optimal"]);
    assert!(out.status.success());
    let d = value(&stdout(&out), "delta_phi");
    assert!((d - 1.0 / 2f64.sinh()).abs() < 1e-6, "{d}");
}

#[test]
fn invalid_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["signal", "--loss", "1.5"][..],
        &["signal", "--input", "bogus"],
        &["signal", "--r", "0.5", "--input", "coherent"],
        &["fig", "9"],
        &["sweep", "-v", "phi", "--start", "1", "--stop", "0", "--step", "0.1"],
    ] {
        let out = su11(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn numerical_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = su11(dir.path(), &["sensitivity", "--detection", "intensity", "--phi", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stationary"));

    let out = su11(dir.path(), &["critical-loss", "--g", "0.1", "--detection", "homodyne"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f"), "x").unwrap();
    let out = su11(dir.path(), &["sweep", "-v", "phi", "--start", "0", "--stop", "0.02", "--step", "0.01", "--out", "f/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = su11(dir.path(), &["sweep", "-v", "phi", "--start", "0", "--stop", "0.02", "--step", "0.01", "--out", "-"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# "));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
    assert!(!dir.path().join("su11-out").exists());
}

#[test]
fn sweep_default_path_honours_env_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "-v", "loss", "--start", "0", "--stop", "0.02", "--step", "0.01"];

    let out = su11(dir.path(), &args);
    assert!(out.status.success());
    assert!(dir.path().join("su11-out/sweep-loss.csv").exists());

    let out = Command::new(env!("CARGO_BIN_EXE_su11"))
        .current_dir(dir.path())
        .env("SU11_OUT_DIR", "from-env")
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("from-env/sweep-loss.csv").exists());

    fs::write(dir.path().join("run.toml"), "out = \"from-file.csv\"\ng = 0.5\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_su11"))
        .current_dir(dir.path())
        .env("SU11_OUT_DIR", "from-env")
        .args(["--config", "run.toml"])
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("from-file.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "# g1 = 0.5"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), "g = 0.5\ninput = \"vacuum\"\nphi = 0.2\n").unwrap();
    let out = su11(dir.path(), &["--config", "run.toml", "signal", "--g", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(value(&text, "g"), 2.0);
    assert_eq!(value(&text, "phi"), 0.2);
    assert!(text.contains("input = vacuum"));

    fs::write(dir.path().join("bad.toml"), "gain = 1\n").unwrap();
    let out = su11(dir.path(), &["--config", "bad.toml", "signal"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn signal_reports_closed_form_next_to_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = su11(dir.path(), &["signal", "--phi", "0.3", "--loss", "0.05"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let (s, cf) = (value(&text, "signal"), value(&text, "closed_form"));
    assert!((s - cf).abs() < 1e-9 * s.abs().max(1e-3), "{s} vs {cf}");
}

#[test]
fn verify_quick_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = su11(dir.path(), &["verify", "--out", "reports"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report = fs::read_to_string(dir.path().join("reports/verify-report.txt")).unwrap();
    assert!(report.contains("PAPER-TENSION"));
}

#[test]
fn verify_with_injected_fault_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = su11(dir.path(), &["verify", "--inject-fault", "x2"]);
    assert_eq!(out.status.code(), Some(4));
    let text = stdout(&out);
    let failing: Vec<_> = text.lines().filter(|l| l.starts_with("failing:")).collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().any(|l| l.contains("x2") || l.contains("exp(-x2/x3)")), "{failing:?}");
}
