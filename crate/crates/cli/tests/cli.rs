use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_homaloidal"));
    c.env_remove("HOMALOIDAL_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    json_of(&out)
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

const FIG1: &str =
    r#"{"n": 4, "edges": [[1, 2, "A"], [2, 3, "B"], [3, 4, "C"], [1, 4, "D"], [1, 3, "E"]]}"#;
const QUADRIC: &str = "7/25*x^2 - y^2 - 48/25*x*z - 7/25*z^2";

#[test]
fn five_cycle_has_degree_eleven() {
    let v = ok(&["mldeg", "cycle", "--n", "5", "--verify"]);
    assert_eq!(v["ml_degree"], 11);
    assert_eq!(v["all_verified"], true);
    assert_eq!(v["fiber"].as_array().unwrap().len(), 11);
    assert_eq!(v["fiber"][1]["b"], "1");
    let unverified = ok(&["mldeg", "cycle", "--n", "5"]);
    assert!(unverified["all_verified"].is_null());
}

#[test]
fn fig1_is_chordal_with_degree_one() {
    let file = scratch("fig1.json", FIG1);
    let out = run(&["graph", "--file", &file]);
    let v = json_of(&out);
    assert_eq!(v["chordal"], true);
    assert_eq!(v["ml_degree"], 1);
    assert_eq!(v["spanning_tree_terms"], 8);

    // the report is itself a valid graph file
    let again = scratch(
        "fig1_report.json",
        &String::from_utf8(out.stdout.clone()).unwrap(),
    );
    assert_eq!(run(&["graph", "--file", &again]).stdout, out.stdout);
}

#[test]
fn four_cycle_from_edge_list() {
    let file = scratch("c4.txt", "4\n1 2\n2 3\n3 4\n4 1\n");
    let v = ok(&["graph", "--file", &file, "--k", "3"]);
    assert_eq!(v["chordal"], false);
    assert_eq!(v["certificate"]["kind"], "eulerian");
    assert_eq!(v["ml_degree"], 4);
}

#[test]
fn bound_for_quadrics_of_rank_three() {
    let v = ok(&["sdr", "bound", "--d", "2", "--r", "3"]);
    assert_eq!(v["general"], 432);
    assert_eq!(v["power_of_two"], 8);
    let odd = ok(&["sdr", "bound", "--d", "3", "--r", "1"]);
    assert!(odd["power_of_two"].is_null());
}

#[test]
fn quadric_round_trip_through_verify() {
    let out = run(&["sdr", "quad", "--poly", QUADRIC]);
    let v = json_of(&out);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["pencil"]["size"], 5);
    assert_eq!(v["verification"]["pass"], true);

    let file = scratch("quad.json", &String::from_utf8(out.stdout).unwrap());
    let r = ok(&[
        "sdr", "verify", "--pencil", &file, "--poly", &file, "--trials", "20",
    ]);
    assert_eq!(r["pass"], true);
    assert_eq!(r["mode"], "float");

    let wrong = run(&["sdr", "verify", "--pencil", &file, "--poly", "x*y*z"]);
    assert_eq!(wrong.status.code(), Some(2));
    assert_eq!(json_of(&wrong)["pass"], false);
}

#[test]
fn power_sum_round_trip_and_pd() {
    let form = scratch(
        "cube.json",
        r#"{"d": 3, "terms": [{"lambda": "2", "form": "x + y - 1"}, {"lambda": "-1/3", "form": "x"}]}"#,
    );
    let out = run(&["sdr", "powersum", "--file", &form]);
    let v = json_of(&out);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["verification"]["pass"], true);
    assert!(v["size"].as_u64().unwrap() <= v["bound"]["general"].as_u64().unwrap());

    let report = scratch(
        "cube_report.json",
        &String::from_utf8(out.stdout.clone()).unwrap(),
    );
    assert_eq!(
        run(&["sdr", "powersum", "--file", &report]).stdout,
        out.stdout
    );
    let pd = ok(&["pd", "check", "--pencil", &report, "--samples", "50"]);
    assert_eq!(pd["verdict"], "never_pd");
    assert_eq!(pd["seed"], 1);
    assert!(pd["witness"].is_null());
}

#[test]
fn diagonal_pencil_has_a_witness() {
    let file = scratch(
        "diag.json",
        r#"{"size": 2, "mode": "exact", "A0": [["0", "0"], ["0", "0"]],
            "coeffs": {"x": [["1", "0"], ["0", "0"]], "y": [["0", "0"], ["0", "1"]]}}"#,
    );
    let v = ok(&[
        "pd", "check", "--pencil", &file, "--seed", "5", "--box", "3/2",
    ]);
    assert_eq!(v["verdict"], "feasible_point_found");
    assert_eq!(v["seed"], 5);
}

#[test]
fn product_of_two_quadrics() {
    let a = run(&["sdr", "quad", "--poly", QUADRIC]);
    let b = run(&["sdr", "quad", "--poly", "a^2 + b^2 - 1"]);
    let fa = scratch("qa.json", &String::from_utf8(a.stdout).unwrap());
    let fb = scratch("qb.json", &String::from_utf8(b.stdout).unwrap());
    let out = run(&["sdr", "product", "--left", &fa, "--right", &fb]);
    let c = json_of(&out);
    let size = c["size"].as_u64().unwrap();
    assert_eq!(size, c["pencil"]["size"].as_u64().unwrap());
    let fc = scratch("qc.json", &String::from_utf8(out.stdout).unwrap());
    let poly = format!("({QUADRIC})*(a^2 + b^2 - 1)");
    let r = ok(&["sdr", "verify", "--pencil", &fc, "--poly", &poly]);
    assert_eq!(r["pass"], true);

    let clash = run(&["sdr", "product", "--left", &fa, "--right", &fa]);
    assert_eq!(clash.status.code(), Some(1));
}

#[test]
fn covariance_generators_vanish() {
    let file = scratch("fig1_covar.json", FIG1);
    let v = ok(&[
        "covar",
        "generators",
        "--graph",
        &file,
        "--k",
        "2",
        "--samples",
        "20",
        "--seed",
        "7",
    ]);
    assert_eq!(v["generators"].as_array().unwrap().len(), 1);
    assert_eq!(v["generators"][0]["kind"], "cofactor_sum");
    assert_eq!(v["verification"]["all_zero"], true);
    assert_eq!(v["seed"], 7);
}

#[test]
fn seeds_are_recorded_and_reproducible() {
    let args = ["sdr", "quad", "--poly", "x*y + 2", "--trials", "10"];
    let a = bin()
        .args(args)
        .env("HOMALOIDAL_SEED", "42")
        .output()
        .unwrap();
    let b = bin()
        .args(args)
        .env("HOMALOIDAL_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["seed"], 42);
    let flag = run(&[
        "sdr", "quad", "--poly", "x*y + 2", "--trials", "10", "--seed", "42",
    ]);
    assert_eq!(flag.stdout, a.stdout);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["mldeg", "cycle"],
        vec!["frobnicate"],
        vec!["graph", "--file", "/nonexistent/graph.json"],
        vec!["sdr", "quad", "--poly", "x^3"],
        vec!["sdr", "bound", "--d", "0", "--r", "1"],
        vec!["mldeg", "cycle", "--n", "2"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn text_output() {
    let out = run(&["sdr", "bound", "--d", "4", "--r", "2", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "power_of_two: 36"));
}
