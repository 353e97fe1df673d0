use std::io::Write;

use prolong_cli::report::{Report, Status};
use prolong_cli::run;

fn prolong(args: &[&str]) -> prolong_cli::Outcome {
    run(std::iter::once("prolong").chain(args.iter().copied()))
}

fn temp(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("prolong-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::File::create(&p).unwrap().write_all(text.as_bytes()).unwrap();
    p
}

#[test]
fn sl2r_all_checks_pass_in_json() {
    let out = prolong(&["verify", "--system", "sl2r", "--checks", "all", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = Report::from_json(&out.stdout).unwrap();
    assert_eq!(r.summary.fail, 0);
    assert_eq!(r.summary.total, r.checks.len());
    assert!(r.checks.iter().any(|c| c.id == "sl2r/gauge/symbolic" && c.status == Status::Pass));
}

#[test]
fn unknown_system_is_input_error() {
    let out = prolong(&["verify", "--system", "nosuch"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("nosuch"));
    assert_eq!(prolong(&["verify", "--checks", "bogus"]).code, 2);
    assert_eq!(prolong(&["frobnicate"]).code, 2);
    assert_eq!(prolong(&["--help"]).code, 0);
}

#[test]
fn o3_traces_report_chart_findings() {
    let out = prolong(&["verify", "--system", "o3", "--checks", "traces", "--format", "json"]);
    assert_eq!(out.code, 0);
    let r = Report::from_json(&out.stdout).unwrap();
    for id in ["o3/charts/ratio/y7", "o3/charts/dal8"] {
        assert_eq!(r.find(id).map(|c| c.status), Some(Status::Discrepancy), "{id}");
    }
    assert_eq!(r.find("o3/traces/dtrace1").map(|c| c.status), Some(Status::Pass));
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--system", "o3", "--checks", "all", "--format", "json"];
    let a = Report::from_json(&prolong(&args).stdout).unwrap().without_timings();
    let b = Report::from_json(&prolong(&args).stdout).unwrap().without_timings();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(Report::from_json(&a.to_json()).unwrap().to_json(), a.to_json());
}

#[test]
fn derive_prints_chart_forms() {
    let out = prolong(&["derive", "--system", "sl2r", "--pivot", "1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("al3 = 2*y3*w1 + y3^2*w2 - w3 + dy3"), "{}", out.stdout);
    assert!(out.stdout.contains("y3 = y2/y1"));

    let out = prolong(&["derive", "--system", "su3", "--pivot", "2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("al6 = (-1 + y6^2)*w1 + (i + i*y6^2)*w2 - 2*y6*w3"), "{}", out.stdout);
    assert!(out.stdout.contains("al7 = y6*y7*w1 + i*y6*y7*w2 - y7*w3"));

    assert_eq!(prolong(&["derive", "--system", "sl2r", "--pivot", "5"]).code, 2);
    assert_eq!(prolong(&["derive", "--system", "sl2r", "--pivot", "0"]).code, 2);
}

#[test]
fn derive_latex() {
    let out = prolong(&["derive", "--system", "sl2r", "--pivot", "2", "--format", "latex"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("\\alpha_{4}"), "{}", out.stdout);
    assert!(out.stdout.contains("\\omega_{1}"));
}

#[test]
fn conserve_constants() {
    let p = temp("unit.json", r#"{"a1": {"const": 1}, "a2": {"const": 1}, "N": 3}"#);
    let out = prolong(&["conserve", "--coeffs", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = Report::from_json(&out.stdout).unwrap();
    assert_eq!(r.sections[0].lines, ["I1 = 1/2", "I2 = -1/8", "I3 = 1/16"]);

    let out = prolong(&["conserve", "--coeffs", p.to_str().unwrap(), "--order", "2", "--etas", "10,20,40,80"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("[pass       ] conserve/residual-slope-N2"), "{}", out.stdout);
}

#[test]
fn conserve_grid_coefficients() {
    let grid: Vec<String> = (0..2001).map(|k| format!("{}", 1.0 + 0.1 * (k as f64 * 0.01).sin())).collect();
    let text = format!(r#"{{"a1": {{"grid": [{}], "x0": 0, "h": 0.01}}, "a2": {{"const": 0.5}}, "N": 2}}"#, grid.join(","));
    let p = temp("grid.json", &text);
    let out = prolong(&["conserve", "--coeffs", p.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("densities on the grid"));
}

#[test]
fn conserve_input_errors() {
    let p = temp("no-a2.json", r#"{"a1": {"const": 1}, "N": 2}"#);
    let out = prolong(&["conserve", "--coeffs", p.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("a2"));
    let p = temp("broken.json", "{\"a1\": ");
    assert_eq!(prolong(&["conserve", "--coeffs", p.to_str().unwrap()]).code, 2);
    assert_eq!(prolong(&["conserve", "--coeffs", "/nonexistent/c.json"]).code, 2);
}

#[test]
fn parse_round_trip_and_diagnostics() {
    let p = temp("sl2r.eds", prolong_core::catalog::builtin_text("sl2r").unwrap());
    let out = prolong(&["parse", p.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("system sl2r"));

    let bad = temp("bad.eds", "system x\ndim 2\noneforms w1 w2 w3\npseudos y1 y2\nconnection [[w1, w2], [w3, -w1.5]]\n");
    let out = prolong(&["parse", bad.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains(":5:"), "{}", out.stderr);
}

#[test]
fn custom_system_gets_generic_checks() {
    let p = temp("custom.eds", prolong_core::catalog::builtin_text("sl2r").unwrap().replace("system sl2r", "system mine").as_str());
    let out = prolong(&["verify", "--system", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = Report::from_json(&out.stdout).unwrap();
    assert_eq!(r.systems, ["mine"]);
    assert_eq!(r.summary.discrepancy, 0);
    assert!(r.checks.iter().all(|c| c.source != "printed"));
}
