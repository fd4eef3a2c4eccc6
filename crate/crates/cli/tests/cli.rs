use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn nageo(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nageo")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn empty_task_list_exits_zero_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = nageo(&["run", "--config", &config("empty.json"), "--out", "out"], dir.path());
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(!dir.path().join("out").exists());
}

#[test]
fn planted_violation_exits_one_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let o = nageo(&["run", "--config", &config("planted_violation.json")], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    let c = &v["rows"][0]["witness"]["counterexample"];
    assert_eq!((c["k"].as_u64(), c["l"].as_u64()), (Some(1), Some(1)));
    assert_eq!((c["a"].as_str(), c["b"].as_str()), (Some("x0"), Some("x0")));
}

#[test]
fn theorem_b_on_comparable_pair_reports_minus_t_energies() {
    let dir = tempfile::tempdir().unwrap();
    let o = nageo(&["run", "--config", &config("theorem_b_comparable.json")], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["name"] == "energy_vs_start").unwrap();
    let e: Vec<&str> = row["detail"]["energy"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(e, ["0", "-1/4", "-1/2", "-3/4", "-1"]);
}

#[test]
fn segments_verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = nageo(
        &[
            "segments",
            "verify",
            "--suite",
            "theoremB",
            "--config",
            &config("comparable_pair.json"),
            "--out",
            "report.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["status"] == "pass" && r["name"].is_string()));
}

#[test]
fn maximal_segment_midpoint_of_comparable_pair() {
    let dir = tempfile::tempdir().unwrap();
    let o = nageo(
        &["segments", "maximal", "--config", &config("comparable_pair.json"), "--t", "1/2", "--kmax", "8"],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["potential"], "max(0, v-1)");
}

#[test]
fn toric_energy_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = nageo(
        &["toric", "energy", "--config", &config("comparable_pair.json"), "--kmax", "4", "--out", "csv"],
        dir.path(),
    );
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,exact_value,decimal_value,oracle_limit"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn unknown_task_is_rejected_with_position_and_known_names() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"tasks\": [\n    { \"op\": \"frobnicate\" }\n  ]\n}\n").unwrap();
    let o = nageo(&["run", "--config", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("frobnicate") && err.contains("geodesic") && err.contains("line 3"), "{err}");
}

#[test]
fn undefined_object_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"tasks": [{"op": "energy", "phi0": "a", "phi1": "b"}]}"#).unwrap();
    let o = nageo(&["run", "--config", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("undefined object `a`"));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = nageo(&["run", "--config", &config("experiment.json")], d.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let out = |d: &tempfile::TempDir| d.path().join("out/experiment");
    let mut names: Vec<_> = std::fs::read_dir(out(&a)).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 9);
    for n in names {
        assert_eq!(std::fs::read(out(&a).join(&n)).unwrap(), std::fs::read(out(&b).join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn negative_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = nageo(&["suite", "negative", "--format", "csv"], dir.path());
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("name,status,tag,detail,witness\n"));
}
