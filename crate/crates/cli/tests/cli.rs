use std::process::{Command, Output};

fn qubus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qubus")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).filter(|rest| rest.starts_with(' ')))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qubus-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn error_prob_prints_the_budget() {
    let out = qubus(&["error-prob", "--eta", "0.9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(value(&text, "eta"), 0.9);
    assert_eq!(value(&text, "alpha"), 100.0);
    let e = value(&text, "E_tot");
    assert!(e > 0.0 && e < 0.5, "{text}");
}

#[test]
fn zero_transmittance_is_a_usage_error() {
    let out = qubus(&["error-prob", "--eta", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eta"));
}

#[test]
fn unknown_figure_and_even_code_exit_2() {
    assert_eq!(qubus(&["figure", "fig9"]).status.code(), Some(2));
    assert_eq!(qubus(&["error-prob", "--code", "4"]).status.code(), Some(2));
    assert_eq!(qubus(&["error-prob", "--eta", "0.9", "--eta1", "0.9", "--eta2", "0.9"]).status.code(), Some(2));
}

#[test]
fn figure_csv_has_header_and_grid() {
    let out = qubus(&["figure", "fig5a"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eta,r0,r0.5,r1.0,r1.5"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r.split(',').count() == 5));
}

#[test]
fn out_flag_writes_a_csv_file() {
    let path = tmp("sweep.csv");
    let out = qubus(&["sweep", "--r", "0", "--code", "3", "--points", "5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("eta,eta1,eta2,loss_db"));
    assert_eq!(lines.len(), 6);
}

#[test]
fn flags_override_the_config_file() {
    let path = tmp("run.conf");
    std::fs::write(&path, "# lossy link\neta = 0.8\nnbar = 400\n").unwrap();
    let from_file = stdout(&qubus(&["error-prob", "--config", path.to_str().unwrap()]));
    assert_eq!(value(&from_file, "eta"), 0.8);
    assert_eq!(value(&from_file, "alpha"), 20.0);
    let overridden = stdout(&qubus(&["error-prob", "--config", path.to_str().unwrap(), "--eta", "0.95"]));
    assert_eq!(value(&overridden, "eta"), 0.95);
    assert_eq!(value(&overridden, "alpha"), 20.0);
}

#[test]
fn bad_config_key_is_a_usage_error() {
    let path = tmp("bad.conf");
    std::fs::write(&path, "colour = blue\n").unwrap();
    assert_eq!(qubus(&["error-prob", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn threshold_reports_status() {
    let out = qubus(&["threshold", "--code", "7", "--r", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("reached"));
    let star = value(&text, "eta_star");
    assert!(star > 0.9 && star < 1.0);
}

#[test]
fn scenarios_run() {
    for name in ["si-detector", "microtoroid", "combined"] {
        let out = qubus(&["scenario", name]);
        assert!(out.status.success(), "{name}");
        assert!(stdout(&out).contains("E_tot"));
    }
}

#[test]
fn verify_passes_with_small_sample_count() {
    let out = qubus(&["verify", "--samples", "200000"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("checks passed"));
}
