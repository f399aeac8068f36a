//! End-to-end checks of the command-line surface: subcommands, file outputs,
//! and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn instance_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/berlin52.tsp")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_caf-tsp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn parse_prints_summary() {
    let inst = instance_path();
    let output = run(&["parse", "--instance", inst.to_str().unwrap()]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("name: berlin52"));
    assert!(text.contains("dimension: 52"));
    assert!(text.contains("(565, 575)"));
}

#[test]
fn missing_file_exits_with_input_error() {
    let output = run(&["parse", "--instance", "/nonexistent/foo.tsp"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn solve_reports_known_optimum() {
    let inst = instance_path();
    let output = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--n",
        "5",
        "--no-caf",
    ]);
    assert!(output.status.success(), "{output:?}");
    let text = stdout(&output);
    assert!(text.contains("status: Optimal"));
    assert!(text.contains("objective: 2314.55"));
}

#[test]
fn solve_too_large_for_dp_is_an_input_error() {
    let inst = instance_path();
    let output = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--n",
        "30",
        "--engine",
        "held-karp",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn caf_dump_lists_reduced_arcs() {
    let inst = instance_path();
    let output = run(&[
        "caf",
        "dump",
        "--instance",
        inst.to_str().unwrap(),
        "--n",
        "5",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().map(str::trim_end).collect();
    assert_eq!(lines.len(), 18);
    for line in &lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        fields[2].parse::<f64>().unwrap();
    }
}

#[test]
fn table2_csv_has_expected_first_row() {
    let inst = instance_path();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table2.csv");
    let output = run(&[
        "table2",
        "--instance",
        inst.to_str().unwrap(),
        "--n-range",
        "5..10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.lines().any(|l| l == "5,20,18,10"));
    assert!(csv.starts_with("# config_hash="));
}

#[test]
fn export_writes_model_and_sidecar() {
    let inst = instance_path();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("model.lp");
    let output = run(&[
        "export",
        "--instance",
        inst.to_str().unwrap(),
        "--n",
        "5",
        "--no-caf",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let body = std::fs::read_to_string(&out).unwrap();
    assert!(body.starts_with("Minimize"));
    assert!(body.ends_with("End\n"));
    let meta = std::fs::read_to_string(dir.path().join("model.lp.meta")).unwrap();
    assert_eq!(
        meta,
        "variables=20 degree_constraints=10 subtour_constraints=25\n"
    );
}

#[test]
fn export_enumeration_guard_is_an_input_error() {
    let inst = instance_path();
    let output = run(&[
        "export",
        "--instance",
        inst.to_str().unwrap(),
        "--n",
        "17",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn anneal_single_run_is_feasible() {
    let inst = instance_path();
    let output = run(&[
        "anneal",
        "--instance",
        inst.to_str().unwrap(),
        "--n",
        "6",
        "--seed",
        "3",
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("feasible_in_arcs: true"));
}

#[test]
fn fig1_and_table2_are_reproducible() {
    let inst = instance_path();
    let args = [
        "fig1",
        "--instance",
        inst.to_str().unwrap(),
        "--n-range",
        "5..50",
    ];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
