use std::path::PathBuf;
use std::process::{Command, Output};

use normflow::algebra::TruncatedSeries;
use normflow::asymptotic::{GradedHamiltonian, GradedJson};
use normflow::flow::CanonicalTransform;
use normflow::io::{NormalJson, SeriesJson};
use serde_json::Value;

const FIXTURES: [&str; 4] = ["z3_plus_zbar3.json", "normal_seed.json", "three_system.json", "two_dof.json"];

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn normflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normflow")).args(args).env_remove("NORMFLOW_THREADS").output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = normflow(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn series(v: &Value) -> TruncatedSeries {
    let j: SeriesJson = serde_json::from_value(v.clone()).unwrap();
    j.to_series().unwrap()
}

#[test]
fn normal_form_of_worked_fixture() {
    let v = ok_json(&["normal-form", "--input", &fixture("z3_plus_zbar3.json")]);
    let nf: NormalJson = serde_json::from_value(v).unwrap();
    assert_eq!(nf.terms.len(), 1);
    assert_eq!(nf.terms[0].l, vec![2]);
    assert!((nf.terms[0].re + 3.0).abs() < 1e-9);
    assert!(nf.terms[0].im.abs() < 1e-9);
}

#[test]
fn rk4_at_zero_echoes_the_input() {
    for name in FIXTURES {
        let path = fixture(name);
        let v = ok_json(&["flow", "--mode", "rk4", "--delta", "0", "--input", &path]);
        let raw: SeriesJson = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(series(&v["results"][0]["series"]), raw.to_series().unwrap().into_diamond().unwrap(), "{name}");
    }
}

#[test]
fn exact_and_rk4_agree_on_fixtures() {
    for name in FIXTURES {
        let path = fixture(name);
        let exact = ok_json(&["flow", "--delta", "0.5,1,2", "--input", &path]);
        let rk4 = ok_json(&["flow", "--mode", "rk4", "--delta", "0.5,1,2", "--input", &path]);
        for i in 0..3 {
            let a = series(&exact["results"][i]["series"]);
            let b = series(&rk4["results"][i]["series"]);
            let rel = a.max_abs_diff(&b) / a.max_abs_coeff().max(f64::MIN_POSITIVE);
            assert!(rel < 1e-6, "{name}, result {i}: {rel:e}");
        }
    }
}

#[test]
fn emitted_json_round_trips() {
    let path = fixture("two_dof.json");
    let flow = ok_json(&["flow", "--delta", "0,1", "--input", &path]);
    for r in flow["results"].as_array().unwrap() {
        let j: SeriesJson = serde_json::from_value(r["series"].clone()).unwrap();
        assert_eq!(serde_json::to_value(SeriesJson::from_series(&j.to_series().unwrap())).unwrap(), r["series"]);
    }

    let nf = ok_json(&["normal-form", "--input", &path]);
    let j: NormalJson = serde_json::from_value(nf.clone()).unwrap();
    assert_eq!(serde_json::to_value(NormalJson::from_normal(&j.to_normal().unwrap())).unwrap(), nf);

    let t = ok_json(&["transform", "--delta", "1", "--input", &path]);
    let tj = serde_json::from_value(t["transform"].clone()).unwrap();
    let back = CanonicalTransform::from_json(&tj).unwrap();
    assert_eq!(serde_json::to_value(back.to_json()).unwrap(), t["transform"]);
    assert!(t["symplectic_residual"].as_f64().unwrap() < 1e-7);

    let a = ok_json(&["asymptotic", "--delta", "0.5", "--input", &path]);
    let g: GradedJson = serde_json::from_value(a["results"][0]["graded"].clone()).unwrap();
    let back = GradedHamiltonian::from_json(&g).unwrap();
    assert_eq!(serde_json::to_value(back.to_json()).unwrap(), a["results"][0]["graded"]);
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flow.json");
    let path = fixture("three_system.json");
    let args = ["flow", "--delta", "1,3", "--input", &path];
    let first = normflow(&args);
    let status = normflow(&[&args[..], &["--output", out.to_str().unwrap()]].concat());
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), first.stdout);
    assert_eq!(normflow(&args).stdout, first.stdout);
}

#[test]
fn csv_has_one_row_per_coefficient_and_delta() {
    let path = fixture("z3_plus_zbar3.json");
    let out = normflow(&["flow", "--format", "csv", "--delta", "0,1", "--input", &path]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k1,kbar1,delta,re,im"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 5));
    let at_zero: Vec<_> = rows.iter().filter(|r| r[2] == "0").collect();
    assert_eq!(at_zero.len(), 2);
    let kappa2 = rows.iter().find(|r| r[0] == "2" && r[1] == "2" && r[2] == "1").unwrap();
    let want = -3.0 * (1.0 - (-6.0f64).exp());
    assert!((kappa2[3].parse::<f64>().unwrap() - want).abs() < 1e-12);

    let radius = normflow(&["radius", "--format", "csv", "--delta", "0,1,2", "--input", &path]);
    assert_eq!(radius.status.code(), Some(0));
    let text = String::from_utf8(radius.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("delta,radius,norm"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn check_reports() {
    let v = ok_json(&["check", "--input", &fixture("normal_seed.json")]);
    assert_eq!(v["ok"], Value::Bool(true));
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["detail"] == "fixed point: all trajectories constant"));

    for name in FIXTURES {
        let v = ok_json(&["check", "--delta", "0.5,2", "--input", &fixture(name)]);
        assert_eq!(v["ok"], Value::Bool(true), "{name}: {v}");
        let rk = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "exact vs rk4").unwrap();
        assert_eq!(rk["passed"], Value::Bool(true));
    }
}

#[test]
fn three_system_and_radius_run() {
    let v = ok_json(&["three-system", "--delta", "0,1", "--input", &fixture("three_system.json")]);
    assert_eq!(v["q"].as_array().unwrap().len(), 2);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
    let r = ok_json(&["radius", "--delta", "0,0.5,1,2", "--input", &fixture("z3_plus_zbar3.json")]);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let radii: Vec<f64> = rows.iter().map(|x| x["radius"].as_f64().unwrap()).collect();
    assert!(radii.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let no_omega = dir.path().join("no_omega.json");
    std::fs::write(&no_omega, r#"{"n":1,"M":4,"terms":[{"k":[3],"kbar":[0],"re":1.0,"im":0.0}]}"#).unwrap();
    let z3 = fixture("z3_plus_zbar3.json");

    assert_eq!(normflow(&["flow", "--input", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(normflow(&["flow", "--input", "/nonexistent/seed.json"]).status.code(), Some(1));
    assert_eq!(normflow(&["flow", "--bogus"]).status.code(), Some(1));
    assert_eq!(normflow(&["flow", "--delta", "x", "--input", &z3]).status.code(), Some(1));
    assert_eq!(normflow(&["flow", "--input", no_omega.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(normflow(&["flow", "--delta=-1", "--input", &z3]).status.code(), Some(2));
    assert_eq!(normflow(&["flow", "--degree", "2", "--input", &z3]).status.code(), Some(2));
    assert_eq!(normflow(&["flow", "--mode", "rk4", "--steps", "0", "--input", &z3]).status.code(), Some(2));
    assert_eq!(normflow(&["normal-form", "--mode", "rk4", "--input", &z3]).status.code(), Some(2));
    // omega = (1, 1) is resonant.
    assert_eq!(normflow(&["flow", "--omega", "1,1", "--input", &fixture("two_dof.json")]).status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_results() {
    let path = fixture("two_dof.json");
    let args = ["flow", "--delta", "0.5,1", "--input", &path];
    let default = normflow(&args);
    let capped = Command::new(env!("CARGO_BIN_EXE_normflow")).args(args).env("NORMFLOW_THREADS", "1").output().unwrap();
    assert_eq!(capped.status.code(), Some(0));
    assert_eq!(capped.stdout, default.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_normflow")).args(args).env("NORMFLOW_THREADS", "0").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
