use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn eam(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eam"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_project(dir: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut body = String::from("name,LOC,McCC,Defective\n");
    for i in 0..120 {
        let loc: u32 = rng.random_range(1..300);
        let mcc: u32 = rng.random_range(1..40);
        let defective = rng.random::<f64>() < 0.15 + f64::from(mcc) / 80.0;
        body.push_str(&format!("mod{i},{loc},{mcc},{}\n", if defective { "Y" } else { "N" }));
    }
    fs::write(dir.join("proj.csv"), body).unwrap();
    fs::write(dir.join("proj.schema.json"), r#"{"id": "name"}"#).unwrap();
}

#[test]
fn missing_data_file_exits_2_naming_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = eam(dir.path(), &["evaluate", "--data", "absent.csv", "--predictors", "LOC", "--effort", "LOC"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("absent.csv"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write_project(dir.path());
    let o = eam(dir.path(), &["evaluate", "--data", "proj.csv", "--effort", "LOC"]);
    assert_eq!(o.status.code(), Some(2), "model source is required");
    let o = eam(dir.path(), &["evaluate", "--data", "proj.csv", "--predictors", "LOC", "--effort", "composite:LOC,McCC,1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = eam(dir.path(), &["evaluate", "--data", "proj.csv", "--predictors", "LOC", "--effort", "LOC", "--budgets", "0.2,1.2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = eam(dir.path(), &["evaluate", "--data", "proj.csv", "--predictors", "Halstead", "--effort", "LOC"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Halstead"));
}

#[test]
fn evaluate_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write_project(dir.path());
    let o = eam(
        dir.path(),
        &[
            "evaluate", "--data", "proj.csv", "--predictors", "LOC,McCC/LOC", "--effort", "LOC", "--effort", "McCC",
            "--rank", "score", "--rank", "density", "--rank", "optimal", "--out-dir", "out",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["dataset"]["modules"], 120);
    assert_eq!(report["model"]["source"], "blr");
    let rows = report["results"].as_array().unwrap();
    for row in rows {
        let keys: Vec<&str> = row.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["budget", "driver", "metric", "policy", "project", "value"]);
    }
    let popt_optimal: Vec<f64> = rows
        .iter()
        .filter(|r| r["policy"] == "optimal" && r["metric"] == "Popt")
        .map(|r| r["value"].as_f64().unwrap())
        .collect();
    assert_eq!(popt_optimal, [1.0, 1.0]);
    assert!(rows.iter().any(|r| r["metric"] == "NPofB" && r["policy"] == "density"));

    let tables = fs::read_to_string(out.join("tables.csv")).unwrap();
    assert!(tables.starts_with("project,policy,metric,LOC,McCC\n"));
    assert!(tables.contains("proj,density,NPofB20,"));
    for policy in ["score", "density", "optimal"] {
        let svg = fs::read_to_string(out.join(format!("curves/{policy}.svg"))).unwrap();
        assert!(svg.contains(r#"class="diagonal""#));
        assert!(!svg.contains("href") && !svg.contains("url("));
        let csv = fs::read_to_string(out.join(format!("curves/{policy}_LOC.csv"))).unwrap();
        assert!(csv.starts_with("policy,driver,curve,x,y\n"));
    }
}

#[test]
fn imported_scores_and_density_ranking() {
    let dir = tempfile::tempdir().unwrap();
    write_project(dir.path());
    let scores: String = (0..120).rev().map(|i| format!("mod{i},{}\n", f64::from(i) / 120.0)).collect();
    fs::write(dir.path().join("ext.csv"), format!("id,score\n{scores}")).unwrap();
    let o = eam(
        dir.path(),
        &[
            "evaluate", "--data", "proj.csv", "--scores", "ext.csv", "--score-kind", "raw", "--rank", "density",
            "--norm", "LOC", "--effort", "LOC", "--out-dir", "out",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("NPofB20"), "{stdout}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["model"]["source"], "imported");
    assert_eq!(report["config"]["score_kind"], "raw");
}

#[test]
fn compare_needs_two_drivers() {
    let dir = tempfile::tempdir().unwrap();
    write_project(dir.path());
    let o = eam(dir.path(), &["compare", "--data", "proj.csv", "--predictors", "LOC", "--effort", "LOC"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("need ≥2 drivers"));
}

#[test]
fn compare_overlays_drivers() {
    let dir = tempfile::tempdir().unwrap();
    write_project(dir.path());
    let o = eam(
        dir.path(),
        &[
            "compare", "--data", "proj.csv", "--predictors", "LOC,McCC/LOC", "--effort", "LOC", "--effort", "McCC",
            "--effort", "composite:LOC,McCC,0.2", "--out-dir", "cmp",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = fs::read_to_string(dir.path().join("cmp/compare.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
    assert!(svg.contains(r#"class="diagonal""#));
    let csv = fs::read_to_string(dir.path().join("cmp/compare.csv")).unwrap();
    assert!(csv.contains("score,\"composite:LOC,McCC,0.2\",model,0,0\n"));
}

#[test]
fn selftest_passes_and_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let a = eam(dir.path(), &["selftest"]);
    let b = eam(dir.path(), &["selftest"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains(" 0 failed"));
}

#[test]
fn computation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("one.csv"), "LOC,Defective\n10,N\n20,N\n30,N\n").unwrap();
    let o = eam(dir.path(), &["evaluate", "--data", "one.csv", "--predictors", "LOC", "--effort", "LOC"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}
