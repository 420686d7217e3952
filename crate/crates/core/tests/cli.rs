//! Golden runs of the `confzero` binary: exit codes, formats and overrides.

use std::path::PathBuf;
use std::process::{Command, Output};

use conformal_zeros::commands::CHECKS;
use conformal_zeros::report::Report;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confzero")).args(args).output().expect("binary runs")
}

fn cfg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn report(out: &Output) -> Report {
    Report::from_json(&String::from_utf8_lossy(&out.stdout)).expect("report JSON")
}

fn write_config(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_dilation_exits_zero() {
    let out = run(&["verify", &cfg("dilation.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert!(r.pass);
    assert!(r.checks.iter().all(|c| !c.anchor.is_empty()));
    assert_eq!(r.checks[0].name, "conformality");
}

#[test]
fn verify_cone_lists_only_the_vertex() {
    let out = run(&["verify", &cfg("cone-22.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let sing = r.checks.iter().find(|c| c.name == "singular-set").unwrap();
    assert!(!sing.witnesses.is_empty());
    for w in &sing.witnesses {
        assert!(w.iter().map(|x| x * x).sum::<f64>().sqrt() <= sing.tol.unwrap());
    }
    // Checks appear in the documented order.
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    let order: Vec<&str> = CHECKS.iter().map(|c| c.0).filter(|n| names.contains(n)).collect();
    assert_eq!(names, order);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(run(&["verify", &cfg("bad-gram.json")]).status.code(), Some(2));
    assert_eq!(run(&["verify", "/nonexistent/config.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(&dir, "u.json", r#"{"n":3,"gram":[[1,0,0],[0,1,0],[0,0,1]],"w":[0,0,0],"S":[[0,0,0],[0,0,0],[0,0,0]],"c":0,"u":[0,0,0],"extra":1}"#);
    assert_eq!(run(&["verify", &unknown]).status.code(), Some(2));
    assert_eq!(run(&["verify", &cfg("dilation.json"), "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn classify_cases_and_non_zero() {
    let r = report(&run(&["classify", &cfg("dilation.json")]));
    let cls = &r.details["classification"];
    assert_eq!(cls["case"], "iii");
    assert_eq!(cls["essential"], true);
    assert_eq!(cls["dim_h"], 0);
    let r = report(&run(&["classify", &cfg("killing-block.json")]));
    assert_eq!(r.details["classification"]["case"], "i");
    assert_eq!(r.details["classification"]["essential"], false);
    let r = report(&run(&["classify", &cfg("cone-22.json")]));
    assert_eq!(r.details["classification"]["case"], "ii");

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("dilation.json")).unwrap().replace("\"z\":[0,0,0]", "\"z\":[1,0,0]");
    let out = run(&["classify", &write_config(&dir, "nz.json", &text)]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!(r.checks[0].value.unwrap() > 0.5);
}

#[test]
fn zeroset_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kb.csv");
    let out = run(&["zeroset", &cfg("killing-block.json"), "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n'));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["x1", "x2", "x3", "residual"]);
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let x: Vec<f64> = rec.iter().map(|s| s.parse().unwrap()).collect();
        assert!(x[1].hypot(x[2]) <= 1e-8, "{x:?}");
        rows += 1;
    }
    assert!(rows > 100);
    let side = Report::from_json(&std::fs::read_to_string(dir.path().join("kb.csv.report.json")).unwrap()).unwrap();
    assert!(side.details.contains_key("components"));

    let out = run(&["zeroset", &cfg("no-zeros.json"), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "x1,x2,x3,residual\n");

    let out = run(&["zeroset", &cfg("dilation.json"), "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 2);

    let out = run(&["zeroset", &cfg("dilation.json"), "--out", "/nonexistent/dir/out.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn propagate_writes_trajectory_and_rejects_bad_state() {
    let out = run(&["propagate", &cfg("propagate-null-line.json"), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x1,x2,x3,x4,v1,v2,v3,v4,phi");
    assert_eq!(lines.count(), 1001);

    let r = report(&run(&["propagate", &cfg("propagate-null-line.json")]));
    assert!(r.pass);

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("propagate-null-line.json")).unwrap().replace("\"steps\":1000", "\"steps\":1000,\"phi0\":5");
    let out = run(&["propagate", &write_config(&dir, "bad.json", &text)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn demo_registry() {
    let out = run(&["demo", "surface-2d"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.checks[0].witnesses.len(), 6);

    let out = run(&["demo", "killing-block"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).details["classification"]["case"], "i");

    let out = run(&["demo", "case-b-cone-22"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(!r.checks.iter().find(|c| c.name == "singular-set").unwrap().witnesses.is_empty());

    let out = run(&["demo", "odd-codim-null"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.checks.iter().find(|c| c.name == "odd-codimension").unwrap().value, Some(3.0));

    let out = run(&["demo", "no-such-example"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("case-b-null-H-31"));
}

#[test]
fn flags_override_the_file() {
    let r = report(&run(&["classify", &cfg("dilation.json"), "--seed", "99", "--radius", "0.25", "--tol", "1e-5"]));
    assert_eq!(r.config["seed"], 99);
    assert_eq!(r.config["radius"].as_f64(), Some(0.25));
    assert_eq!(r.config["tol"].as_f64(), Some(1e-5));
}

#[test]
fn help_lists_every_check_with_its_statement() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for (name, anchor) in CHECKS {
        assert!(text.contains(name) && text.contains(anchor), "{name}");
    }
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let a = run(&["verify", &cfg("cone-22.json"), "--seed", "3"]);
    let b = run(&["verify", &cfg("cone-22.json"), "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_confzero"))
        .args(["verify", &cfg("cone-22.json"), "--seed", "3"])
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}
