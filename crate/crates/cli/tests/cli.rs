use std::collections::BTreeMap;

use hodge_spectra_cli::{
    execute, parse_args, render, run_with, CheckRecord, CommandKind, Meta, OutputFormat, Parsed, Report, RunConfig,
    RunStatus, EXIT_FAILURE, EXIT_OK, EXIT_USAGE,
};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, None)
}

fn run_env(args: &[&str], threads: Option<&str>) -> (i32, String, String) {
    let mut argv = vec!["hodge-spectra"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, threads, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

#[test]
fn ball_example_reports_values_and_chain() {
    let r = json(&["ball", "--dim", "2", "--radius", "1"]);
    let values: BTreeMap<String, f64> = r["spectra"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["kind"].as_str().unwrap().to_string(), s["values"][0].as_f64().unwrap()))
        .collect();
    assert!((values["dirichlet_laplace"] - 5.783185962946784).abs() < 1e-8);
    assert!((values["buckling"] - 14.681970642123893).abs() < 1e-8);
    assert!((values["clamped_plate"] - 104.36310555884431).abs() < 1e-7);
    for link in ["AL.1", "AL.2", "AL.3"] {
        assert_eq!(check(&r, link)["status"], "pass");
    }
    assert_eq!(r["meta"]["command"], "ball");
    assert_eq!(r["meta"]["status"], "ok");
}

#[test]
fn constants_example() {
    let r = json(&["constants", "--dim", "4", "--degree", "2", "--gamma", "1"]);
    let c = &r["constants"]["n=4,p=2"];
    assert_eq!(c["c_np"].as_f64().unwrap(), 14.0 / 3.0);
    assert!((c["c_np"].as_f64().unwrap() - 4.666667).abs() < 1e-6);
    assert_eq!(c["dirichlet_bound"].as_f64().unwrap(), 6.0);
    assert_eq!(c["buckling_bound"].as_f64().unwrap(), 6.0);
    assert_eq!(c["clamped_bound"].as_f64().unwrap(), 36.0);
    assert_eq!(check(&r, "SphereHalfDegreeIdentity")["status"], "pass");
    assert_eq!(check(&r, "SphereClamped[p=2]")["status"], "constants-only");
}

#[test]
fn box_example_has_spectrum_schema() {
    let r = json(&[
        "box", "--dim", "2", "--extent", "1,1", "--cells", "63,63", "--problem", "buckling", "--degree", "1", "--count",
        "3",
    ]);
    let spectra = r["spectra"].as_array().unwrap();
    assert_eq!(spectra.len(), 1);
    let s = &spectra[0];
    assert_eq!(s["kind"], "buckling");
    assert_eq!(s["degree"], 1);
    assert_eq!(s["values"].as_array().unwrap().len(), 3);
    assert_eq!(s["residuals"].as_array().unwrap().len(), 3);
    for res in s["residuals"].as_array().unwrap() {
        assert!(res.as_f64().unwrap() <= 1e-9);
    }
    assert_eq!(r["checks"], Value::Array(Vec::new()));
}

#[test]
fn converge_reports_a_study() {
    let r = json(&["converge", "--dim", "1", "--extent", "1", "--problem", "dirichlet", "--resolutions", "15,31,63"]);
    let study = &r["studies"][0];
    assert!((study["observed_order"].as_f64().unwrap() - 2.0).abs() < 0.05);
    assert!((study["extrapolated"].as_f64().unwrap() - std::f64::consts::PI.powi(2)).abs() < 1e-3);
}

fn bare_report() -> Report {
    let config = match parse_args(["hodge-spectra", "constants", "--dim", "2", "--degree", "1"], None) {
        Parsed::Run(c) => *c,
        other => panic!("{other:?}"),
    };
    Report {
        meta: Meta {
            command: "constants".into(),
            config,
            versions: BTreeMap::new(),
            status: RunStatus::Ok,
            error: None,
        },
        spectra: Vec::new(),
        checks: Vec::new(),
        constants: BTreeMap::new(),
        studies: Vec::new(),
    }
}

#[test]
fn empty_check_list_is_valid_json() {
    let bytes = render(&bare_report(), OutputFormat::Json).unwrap();
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(v["checks"], Value::Array(Vec::new()));
}

#[test]
fn passing_check_row_ends_with_pass() {
    let mut report = bare_report();
    report.checks.push(CheckRecord {
        name: "BuckCP[p=0]".into(),
        lhs: Some(1.0),
        rhs: Some(2.5),
        relation: "<".into(),
        margin: Some(1.5),
        status: "pass".into(),
        tolerance: 0.0,
        provenance: Vec::new(),
        note: None,
    });
    let text = String::from_utf8(render(&report, OutputFormat::Csv).unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,lhs,rhs,relation,margin,status");
    assert_eq!(lines[1], "BuckCP[p=0],1,2.5,<,1.5,pass");
    assert!(lines[1].ends_with(",pass"));
}

#[test]
fn json_round_trip_is_exact() {
    let config = match parse_args(["hodge-spectra", "ball", "--dim", "5", "--radius", "0.7"], None) {
        Parsed::Run(c) => *c,
        other => panic!("{other:?}"),
    };
    let report = execute(&config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    hodge_spectra_cli::emit_report(&report, OutputFormat::Json, Some(&path)).unwrap();
    let back: Report = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn identical_requests_give_identical_bytes() {
    let args = ["verify", "--dim", "1", "--extent", "1", "--cells", "31"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let (_, csv1, _) = run(&["verify", "--dim", "1", "--extent", "1", "--cells", "31", "--format", "csv"]);
    let (_, csv2, _) = run(&["verify", "--dim", "1", "--extent", "1", "--cells", "31", "--format", "csv"]);
    assert_eq!(csv1, csv2);
}

#[test]
fn numbers_keep_full_precision() {
    let (_, out, _) = run(&["ball", "--dim", "3"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let raw = v["spectra"][0]["values"][0].to_string();
    let digits = raw.chars().filter(|c| c.is_ascii_digit()).count();
    assert!(digits >= 12, "{raw}");
}

#[test]
fn usage_errors_exit_with_one() {
    let cases: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["ball", "--dim", "1"],
        &["ball", "--dim", "two"],
        &["ball", "--dim", "2", "--radius", "-1"],
        &["constants", "--dim", "4", "--degree", "3"],
        &["constants", "--dim", "4", "--degree", "2", "--gamma", "0"],
        &["box", "--dim", "2", "--extent", "1", "--cells", "9,9", "--problem", "buckling"],
        &["box", "--dim", "4", "--extent", "1,1,1,1", "--cells", "5,5,5,5", "--problem", "buckling"],
        &["box", "--dim", "2", "--extent", "1,1", "--cells", "9,9", "--problem", "plate"],
        &["box", "--dim", "2", "--extent", "1,1", "--cells", "2,9", "--problem", "buckling"],
        &["box", "--dim", "2", "--extent", "1,nan", "--cells", "9,9", "--problem", "buckling"],
        &["box", "--dim", "2", "--extent", "1,1", "--cells", "9,9", "--problem", "buckling", "--degree", "3"],
        &["box", "--dim", "2", "--extent", "1,1", "--cells", "9,9", "--problem", "buckling", "--count", "0"],
        &["box", "--dim", "2", "--extent", "1,1", "--cells", "9,9", "--problem", "buckling", "--tol", "0"],
        &["verify", "--dim", "2", "--extent", "1,1", "--cells", "9,9", "--count", "1"],
        &["converge", "--dim", "1", "--extent", "1", "--problem", "buckling", "--resolutions", "15,31"],
        &["converge", "--dim", "1", "--extent", "1", "--problem", "buckling", "--resolutions", "31,15,63"],
        &["converge", "--dim", "1", "--extent", "1", "--problem", "buckling", "--resolutions", "7,15,31", "--index", "0"],
    ];
    for args in cases {
        let (code, out, err) = run(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_cleanly() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
    assert_eq!(run(&["--version"]).0, EXIT_OK);
}

#[test]
fn thread_variable_is_validated_and_recorded() {
    for bad in ["0", "-2", "many", ""] {
        assert_eq!(run_env(&["ball", "--dim", "2"], Some(bad)).0, EXIT_USAGE, "{bad:?}");
    }
    let (code, out, _) = run_env(&["ball", "--dim", "2"], Some("3"));
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["meta"]["config"]["threads"], 3);
}

#[test]
fn threads_do_not_change_results() {
    let args = ["box", "--dim", "3", "--extent", "1,1,1", "--cells", "7,7,7", "--problem", "dirichlet", "--degree", "1"];
    let a: Value = serde_json::from_str(&run_env(&args, Some("1")).1).unwrap();
    let b: Value = serde_json::from_str(&run_env(&args, Some("4")).1).unwrap();
    assert_eq!(a["spectra"], b["spectra"]);
}

#[test]
fn unwritable_output_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let (code, _, err) = run(&["ball", "--dim", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("cannot write report"));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let (code, out, _) = run(&["ball", "--dim", "2", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let (_, direct, _) = run(&["ball", "--dim", "2", "--format", "csv"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn unreachable_tolerance_gives_partial_report() {
    let (code, out, err) = run(&[
        "box", "--dim", "2", "--extent", "1,1", "--cells", "31,31", "--problem", "clamped", "--tol", "1e-17",
    ]);
    assert_eq!(code, EXIT_FAILURE, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["meta"]["status"], "partial");
    assert!(v["meta"]["error"].as_str().unwrap().contains("converge"));
    assert_eq!(v["spectra"][0]["values"].as_array().unwrap().len(), 3);
}

#[test]
fn config_round_trips_through_json() {
    let config = match parse_args(
        ["hodge-spectra", "box", "--dim", "2", "--extent", "1,2", "--cells", "9,11", "--problem", "relative", "--degree", "1"],
        None,
    ) {
        Parsed::Run(c) => *c,
        other => panic!("{other:?}"),
    };
    assert_eq!(config.command, CommandKind::Box);
    let text = serde_json::to_string(&config).unwrap();
    let back: RunConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, config);
}
