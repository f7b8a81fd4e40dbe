use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heat-osc"))
        .args(args)
        .current_dir(dir)
        .env("HEAT_OSC_OUT_DIR", dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn prescribe_probe_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["prescribe", "--data", "-2", "-0.3", "0.3", "1", "--n", "1"],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(text.contains("construction: LogSinePlusPeriodic"));
    assert!(text.contains("r: -2.00000000000e0"));
    assert!(dir.path().join("cert.json").exists());

    let o = run(
        dir.path(),
        &[
            "probe",
            "cert.json",
            "--points",
            "3",
            "--t-min",
            "1e4",
            "--t-max",
            "1e8",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,log_sqrt4t,u_origin,envelope,abs_gap");
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 5));

    let o = run(
        dir.path(),
        &[
            "probe",
            "cert.json",
            "--radius",
            "--points",
            "2",
            "--out",
            "h.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("h.csv")).unwrap();
    assert!(csv.starts_with("tau,phi,H_numeric,H_closed\n"));

    let o = run(dir.path(), &["verify", "cert.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["schema"], "report/1");
    assert_eq!(report["chain_ok"], true);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "prescribe",
        "--average",
        "-1",
        "-0.3",
        "0.3",
        "1",
        "--n",
        "2",
    ];
    let a = stdout(&run(dir.path(), &args));
    let cert_a = std::fs::read_to_string(dir.path().join("cert.json")).unwrap();
    let b = stdout(&run(dir.path(), &args));
    let cert_b = std::fs::read_to_string(dir.path().join("cert.json")).unwrap();
    assert_eq!(a, b);
    assert_eq!(cert_a, cert_b);
}

#[test]
fn failing_chain_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &["prescribe", "--average", "-1", "-0.3", "0.3", "1"],
    );
    // claim a narrower solution band than the data deliver
    let path = dir.path().join("cert.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["expected_u_band"] = serde_json::json!([-0.1, 0.1]);
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = run(dir.path(), &["verify", "cert.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("chain_ok=false"));
}

#[test]
fn precondition_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["prescribe", "--average", "-1", "-0.3", "0.4", "1"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p+q=α+β"));
    let o = run(dir.path(), &["prescribe", "--data", "1", "0", "0.5", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["probe", "missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["prescribe"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reproduce_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["reproduce"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 8);
    for line in text.lines().skip(1) {
        let diff: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
        assert!(diff < 1e-9, "{line}");
    }
}
