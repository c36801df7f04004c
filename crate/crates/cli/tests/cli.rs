use std::io::Write;
use std::process::Command;

fn qei() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qei"))
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(contents.as_bytes()).expect("write temp file");
    f
}

#[test]
fn invalid_config_exits_3_with_message() {
    let cfg = write_temp(r#"{"coeff": {"kind": "p_laplacian", "p": 0.5}}"#);
    let out = qei()
        .args(["gh", "--config"])
        .arg(cfg.path())
        .output()
        .expect("run qei");
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error:"), "stderr: {stderr}");
}

#[test]
fn unknown_flag_exits_3() {
    let out = qei().args(["gh", "--bogus"]).output().expect("run qei");
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn help_exits_0() {
    let out = qei().arg("--help").output().expect("run qei");
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("qei"));
}

#[test]
fn ko_check_convergent_case() {
    let out = qei()
        .args(["ko-check", "--f", "abs(t)^2", "--p", "2", "--alpha", "-1"])
        .output()
        .expect("run qei");
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("json report");
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["classification"], "converges");
}

#[test]
fn ko_check_divergent_case() {
    let out = qei()
        .args(["ko-check", "--f", "abs(t)", "--p", "2", "--alpha", "-1"])
        .output()
        .expect("run qei");
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).expect("json report");
    assert_eq!(v["classification"], "diverges");
}

#[test]
fn decide_reports_zero_only() {
    let cfg = write_temp(
        r#"{
        "operator": {"kind": "p_laplacian", "p": 2.0},
        "f": {"kind": "power_sign", "c": -1.0, "q": 3.0},
        "setting": {"kind": "euclidean", "n": 3},
        "relation": "equation"
    }"#,
    );
    let out = qei()
        .args(["decide", "--config"])
        .arg(cfg.path())
        .output()
        .expect("run qei");
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).expect("json report");
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["conclusion"]["kind"], "zero_only");
}

#[test]
fn decide_inconclusive_exits_2() {
    let cfg = write_temp(
        r#"{
        "operator": {"kind": "p_laplacian", "p": 3.0},
        "f": {"kind": "expr", "expr": "max(0-t,0)^2"},
        "setting": {"kind": "euclidean", "n": 3},
        "relation": "inequality"
    }"#,
    );
    let out = qei()
        .args(["decide", "--config"])
        .arg(cfg.path())
        .output()
        .expect("run qei");
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).expect("json report");
    assert_eq!(v["conclusion"]["kind"], "no_conclusion");
}

#[test]
fn blowup_sweep_is_ordered_csv() {
    let cfg = write_temp(
        r#"{
        "coeff": {"kind": "p_laplacian", "p": 2.0},
        "dimension": 4.0,
        "g": {"kind": "power", "c": 8.0, "q": 3.0},
        "a_values": [0.5, 1.0, 2.0]
    }"#,
    );
    let out = qei()
        .args(["blowup-sweep", "--config"])
        .arg(cfg.path())
        .output()
        .expect("run qei");
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "a,status,R,R_err");
    assert_eq!(lines.len(), 4);
    for (line, a) in lines[1..].iter().zip(["0.5", "1", "2"]) {
        assert!(line.starts_with(&format!("{a},finite_blowup,")), "{line}");
    }
}

#[test]
fn selftest_output_is_deterministic() {
    let run = || {
        qei()
            .args(["selftest", "--seed", "7"])
            .output()
            .expect("run qei")
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&first.stdout).contains("12 of 12 criteria passed"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("report.json");
    let out = qei()
        .args(["ko-check", "--f", "abs(t)^2", "--p", "2"])
        .arg("--output")
        .arg(&path)
        .output()
        .expect("run qei");
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).expect("report file");
    let v: serde_json::Value = serde_json::from_str(&text).expect("json report");
    assert_eq!(v["classification"], "converges");
}
