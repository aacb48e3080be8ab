use std::path::Path;
use std::process::{Command, Output};

fn nsfd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsfd")).args(args).output().expect("spawn nsfd")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn run_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = nsfd(&[
            "run",
            "--problem",
            "logistic",
            "--scheme",
            "snsfd1",
            "--y0",
            "0.5",
            "--h",
            "0.1",
            "--t-end",
            "1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = read(&a);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,y,y_exact,abs_error");
    assert_eq!(lines.len(), 12);
    let last: Vec<f64> = lines[11].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[3] - 1.39728e-3).abs() < 1e-7);
}

#[test]
fn run_without_exact_solution_leaves_columns_empty() {
    let o = nsfd(&["run", "--problem", "monod", "--h", "0.5", "--t-end", "1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",,"));
}

#[test]
fn run_sys_header_and_positivity() {
    let o = nsfd(&["run-sys", "--model", "lv", "--params", "a=1,b=1,c=1,e=1", "--h", "0.5", "--t-end", "5"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x_1,x_2");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r[1] >= 0.0 && r[2] >= 0.0));
    assert_eq!(rows[0][1..], [2.0, 0.5]);
}

#[test]
fn table2_first_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = nsfd(&["table2", "--h-list", "0.1,0.01", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = read(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let v = |k: usize| row[k].parse::<f64>().unwrap();
    assert!((v(1) - 0.0014).abs() < 1e-4);
    assert!((v(3) - 0.0127).abs() < 1e-4);
    assert!((v(5) - 0.0470).abs() < 1e-4);
    let row2: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert!((row2[6].parse::<f64>().unwrap() - 1.0189).abs() < 0.02);
}

#[test]
fn figures_write_two_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = nsfd(&["figures", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let f1 = read(&dir.path().join("figure1.csv"));
    let f2 = read(&dir.path().join("figure2.csv"));
    assert_eq!(f1.lines().count(), 42);
    assert_eq!(f2.lines().count(), 42);
    let nsfd: Vec<f64> = f1.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert!(nsfd.windows(2).all(|w| w[1] >= w[0] && w[1] <= 2.0));
    let euler: Vec<f64> = f1.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(euler.iter().any(|&y| y > 2.0) && euler.iter().skip(2).any(|&y| y < 2.0));
}

#[test]
fn audit_default_registry_passes() {
    let o = nsfd(&["audit", "--samples", "40", "--steps", "200"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}");
    assert!(stdout.contains("audit: ALL PASS"));
}

#[test]
fn audit_with_negative_beta_fails() {
    let o = nsfd(&["audit", "--problem", "logistic", "--beta", "-0.1", "--samples", "10", "--steps", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn audit_empty_selection_is_a_noop() {
    let o = nsfd(&["audit", "--problem", "sine", "--scheme", "auto"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty"));
}

#[test]
fn check_reports_and_exit_codes() {
    let o = nsfd(&["check", "--problem", "cubic", "--scheme", "nsfd"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("problem,scheme,condition,pass,vacuous,witness"));
    let o = nsfd(&["check", "--problem", "logistic", "--scheme", "snsfd3-printed"]);
    assert_eq!(o.status.code(), Some(1));
    let o = nsfd(&["check", "--problem", "logistic", "--scheme", "rk4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "problem = logistic\nscheme = snsfd3\nh = 0.5\nt_end = 50\n").unwrap();
    let o = nsfd(&["run", "--config", cfg.to_str().unwrap(), "--t-end", "1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    for l in text.lines().skip(1) {
        let err: f64 = l.split(',').nth(3).unwrap().parse().unwrap();
        assert!(err < 1e-12);
    }
}

#[test]
fn rates_and_errata_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = nsfd(&["rates", "--problem", "sirs", "--h-list", "0.1,0.05,0.025", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(read(&out).lines().next().unwrap(), "h,error,rate");
    let o = nsfd(&["errata"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("printed"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(nsfd(&["run", "--problem", "nope"]).status.code(), Some(2));
    assert_eq!(nsfd(&["rates", "--problem", "logistic", "--h-list", "0.01,0.1"]).status.code(), Some(2));
    assert_eq!(nsfd(&["split"]).status.code(), Some(2));
}

#[test]
fn split_reports_pass() {
    for p in ["logistic", "cubic", "sine", "monod", "powerlaw", "lv", "sirs"] {
        let o = nsfd(&["split", "--problem", p]);
        assert!(o.status.success(), "{p}");
    }
}
