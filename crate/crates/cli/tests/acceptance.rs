//! One line per acceptance criterion. Every tolerance used is pinned here.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use prolong_cli::report::{CheckResult, Report, Status};
use prolong_cli::run;
use prolong_cli::suites::{parse_groups, run_checks};
use prolong_core::catalog::{builtin_text, load_system, parse_scalar, parse_system, BUILTIN_NAMES};
use prolong_core::conserve::{
    density_residuals, density_solve_symbolic, residual_scaling_check, solve_density_odes, GridFn,
    DEFAULT_TRANSIENT_SPAN,
};
use prolong_core::prolong::{constant_gauge, gauge_transform};
use prolong_core::scalar::Coeff;

const SUITE_SECONDS: f64 = 10.0;
const SCALING_SECONDS: f64 = 5.0;
const DENSITY_REL_TOL: f64 = 1e-6;
const SLOPE_TOL: f64 = 0.15;
const ETAS: [f64; 4] = [10.0, 20.0, 40.0, 80.0];
/// Uniform grid on [0, 30].
const GRID_H: f64 = 0.01;
const GRID_LEN: usize = 3001;
/// Longer window, reported next to the strict one for context only.
const LONG_SPAN: f64 = 24.0;

/// Printed sites already known to disagree with the engine, by check id.
const LOGGED_SITES: [&str; 5] = [
    "sl2r/extensions/dsigma2",
    "sl2r/extensions/dal5",
    "o3/charts/ratio/y7",
    "o3/charts/Omega2[2,1]",
    "o3/charts/dal8",
];

struct Line {
    n: usize,
    ok: bool,
    text: String,
}

fn all_checks(groups: &str) -> Vec<CheckResult> {
    let g = parse_groups(groups).unwrap();
    BUILTIN_NAMES.iter().flat_map(|s| run_checks(load_system(s).unwrap(), &g)).collect()
}

fn with_prefix<'a>(checks: &'a [CheckResult], part: &'a str) -> impl Iterator<Item = &'a CheckResult> {
    checks.iter().filter(move |c| c.id.contains(part))
}

fn ids(it: impl Iterator<Item = impl AsRef<str>>) -> String {
    let v: Vec<String> = it.map(|s| s.as_ref().to_string()).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(", ")
    }
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let checks = all_checks("closure,charts,curvatures,traces,extensions,subsystems");
    let secs = start.elapsed().as_secs_f64();
    let closures: Vec<&CheckResult> = checks
        .iter()
        .filter(|c| c.id.rsplit('/').next().is_some_and(|l| l.starts_with('d')) || c.id.contains("/subsystems/"))
        .collect();
    let failed: Vec<&str> = closures.iter().filter(|c| c.status == Status::Fail).map(|c| c.id.as_str()).collect();
    let ok = failed.is_empty() && !closures.is_empty() && secs < SUITE_SECONDS;
    Line {
        n: 1,
        ok,
        text: format!(
            "{} closure decompositions, zero remainder and closure identity in all but {} [{}]; {secs:.2}s < {SUITE_SECONDS}s",
            closures.len(),
            failed.len(),
            ids(failed.iter())
        ),
    }
}

fn criterion_2() -> Line {
    let checks = all_checks("structure");
    let rows: Vec<&CheckResult> =
        checks.iter().filter(|c| c.id.split('/').nth(2).is_some_and(|l| l.starts_with("dw"))).collect();
    let printed = rows.iter().filter(|c| c.source == "printed").count();
    let bad: Vec<&str> = rows.iter().filter(|c| c.status != Status::Pass).map(|c| c.id.as_str()).collect();
    let curv_ok = with_prefix(&checks, "/structure/curvature").all(|c| c.status == Status::Pass);
    Line {
        n: 2,
        ok: bad.is_empty() && printed == 3 + 3 + 8 && curv_ok,
        text: format!("{printed} printed d(omega) lines matched exactly (3 sl2r, 3 o3, 8 su3); mismatches: {}", ids(bad.iter())),
    }
}

fn criterion_3() -> Line {
    let checks = run_checks(load_system("su3").unwrap(), &parse_groups("structure").unwrap());
    let wanted = ["su3/structure/f-antisymmetric", "su3/structure/commutators", "su3/structure/assemble"];
    let mut bad: Vec<String> =
        wanted.iter().filter(|id| !checks.iter().any(|c| c.id == **id && c.status == Status::Pass)).map(|s| s.to_string()).collect();
    let expansions: Vec<&CheckResult> = with_prefix(&checks, "/f-expansion/").collect();
    bad.extend(expansions.iter().filter(|c| c.status != Status::Pass).map(|c| c.id.clone()));
    Line {
        n: 3,
        ok: bad.is_empty() && expansions.len() == 8,
        text: format!("28 commutators, antisymmetry, entrywise assembly, 8 expansion lines; failing: {}", ids(bad.iter())),
    }
}

fn criterion_4() -> Line {
    let checks = all_checks("charts,curvatures,traces");
    let forms: Vec<&CheckResult> = checks
        .iter()
        .filter(|c| c.id.split('/').nth(1) == Some("charts") && c.id.rsplit('/').next().is_some_and(|l| l.starts_with("al")))
        .collect();
    let form_bad: Vec<&str> =
        forms.iter().filter(|c| !(c.status == Status::Pass && c.source == "printed")).map(|c| c.id.as_str()).collect();
    let fails: Vec<&str> = checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.id.as_str()).collect();
    let unlisted: Vec<&str> = checks
        .iter()
        .filter(|c| c.status == Status::Discrepancy && !LOGGED_SITES.contains(&c.id.as_str()))
        .map(|c| c.id.as_str())
        .collect();
    Line {
        n: 4,
        ok: form_bad.is_empty() && forms.len() == 2 + 6 + 6 && fails.is_empty() && unlisted.is_empty(),
        text: format!(
            "{} chart forms matched printed; self-certification failures: {}; discrepancies outside the logged list: {}",
            forms.len() - form_bad.len(),
            ids(fails.iter()),
            ids(unlisted.iter())
        ),
    }
}

fn criterion_5() -> Line {
    let checks = all_checks("structure");
    let rows: Vec<&CheckResult> =
        checks.iter().filter(|c| c.id.ends_with("/structure/d2") || c.id.ends_with("/structure/bianchi")).collect();
    let bad: Vec<&str> = rows.iter().filter(|c| c.status != Status::Pass).map(|c| c.id.as_str()).collect();
    Line { n: 5, ok: rows.len() == 6 && bad.is_empty(), text: format!("d^2 = 0 and Bianchi on 3 systems; failing: {}", ids(bad.iter())) }
}

fn criterion_6() -> Line {
    let checks = run_checks(load_system("sl2r").unwrap(), &parse_groups("gauge").unwrap());
    let pass = |id: &str| checks.iter().any(|c| c.id == id && c.status == Status::Pass);
    let symbolic = pass("sl2r/gauge/symbolic");
    let identity = pass("sl2r/gauge/identity");
    // A = [[2, 3], [1, 2]], det 1.
    let q = |n| Coeff::from_int(n);
    let a = constant_gauge(&[vec![q(2), q(3)], vec![q(1), q(2)]], &[vec![q(2), q(-3)], vec![q(-1), q(2)]]).unwrap();
    let numeric = gauge_transform(&load_system("sl2r").unwrap(), &a).map(|r| r.covariant()).unwrap_or(false);
    Line {
        n: 6,
        ok: symbolic && identity && numeric,
        text: format!("symbolic unimodular A: {symbolic}; identity leaves Omega: {identity}; rational A=[[2,3],[1,2]]: {numeric}"),
    }
}

fn max_rel_error(ys: &[GridFn], exact: &[f64], from: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for (y, e) in ys.iter().zip(exact) {
        for k in 0..y.len() {
            if y.x(k) - y.x0() > from {
                worst = worst.max(((y.values()[k] - e) / e).abs());
            }
        }
    }
    worst
}

fn criterion_7() -> Line {
    let oracle = ["1/2*a2*a1^-1", "-1/8*a2^2*a1^-3", "1/16*a2^3*a1^-5"];
    let s3 = density_solve_symbolic(3).unwrap();
    let closed = oracle.iter().zip(&s3.densities).all(|(o, d)| parse_scalar(o).unwrap() == *d);
    let exact = (1..=6).all(|n| density_residuals(&density_solve_symbolic(n).unwrap()).unwrap().iter().all(|r| r.is_zero()));

    let (a1, a2) = (1.0, 1.0);
    let unit = GridFn::constant(a1, 0.0, GRID_H, GRID_LEN).unwrap();
    let coeff2 = GridFn::constant(a2, 0.0, GRID_H, GRID_LEN).unwrap();
    let ys = solve_density_odes(&unit, &coeff2, 3).unwrap();
    let stationary = [0.5, -0.125, 0.0625];
    let strict = max_rel_error(&ys, &stationary, DEFAULT_TRANSIENT_SPAN / (2.0 * a1));
    let long = max_rel_error(&ys, &stationary, LONG_SPAN / (2.0 * a1));
    Line {
        n: 7,
        ok: closed && exact && strict < DENSITY_REL_TOL,
        text: format!(
            "closed forms I1..I3: {closed}; recursion exact for N<=6: {exact}; numeric rel. error past x-x0>10/(2a1): {strict:.2e} (tol {DENSITY_REL_TOL:.0e}); past 24/(2a1): {long:.2e}"
        ),
    }
}

fn criterion_8() -> Line {
    let start = Instant::now();
    let unit = GridFn::constant(1.0, 0.0, GRID_H, GRID_LEN).unwrap();
    let window = DEFAULT_TRANSIENT_SPAN / 2.0;
    let results: Vec<_> = (1..=3).map(|n| residual_scaling_check(&unit, &unit, n, &ETAS, window).unwrap()).collect();
    let secs = start.elapsed().as_secs_f64();
    let slopes: Vec<String> =
        results.iter().map(|r| format!("N={}: {:.4}", r.order, r.slope.unwrap_or(f64::NAN))).collect();
    Line {
        n: 8,
        ok: results.iter().all(|r| r.within(SLOPE_TOL)) && secs < SCALING_SECONDS,
        text: format!("slopes {} vs -(N+1) +- {SLOPE_TOL}; {secs:.2}s < {SCALING_SECONDS}s", slopes.join(", ")),
    }
}

fn criterion_9() -> Line {
    let mut found = BTreeSet::new();
    let mut uncertified = Vec::new();
    for sys in ["o3", "sl2r"] {
        let out = run(["prolong", "verify", "--system", sys, "--checks", "all", "--format", "json"]);
        let r = Report::from_json(&out.stdout).unwrap();
        uncertified.extend(r.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.id.clone()));
        found.extend(r.discrepancies().map(|c| c.id.clone()));
    }
    let want: BTreeSet<String> = LOGGED_SITES.iter().map(|s| s.to_string()).collect();
    let extra: Vec<&String> = found.difference(&want).collect();
    let missing: Vec<&String> = want.difference(&found).collect();
    Line {
        n: 9,
        ok: extra.is_empty() && missing.is_empty() && uncertified.is_empty(),
        text: format!(
            "{} discrepancies, all self-certified: {}; missing logged sites: {}; sites beyond the logged list: {}",
            found.len(),
            uncertified.is_empty(),
            ids(missing.iter()),
            ids(extra.iter())
        ),
    }
}

fn criterion_10() -> Line {
    let fixpoints = BUILTIN_NAMES.iter().all(|n| {
        let s = parse_system(builtin_text(n).unwrap()).unwrap();
        let e = s.emit();
        let again = parse_system(&e).unwrap();
        again == s && again.emit() == e
    });
    let dir = std::env::temp_dir().join(format!("prolong-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = [
        ("unbalanced.eds", "system x\ndim 2\noneforms w1 w2 w3\npseudos y1 y2\nconnection [[w1, w2], [w3, -w1]\n"),
        ("float.eds", "system x\ndim 2\noneforms w1 w2 w3\npseudos y1 y2\nconnection [[0.5*w1, w2], [w3, -w1]]\n"),
        ("keyword.eds", "system x\nsize 2\n"),
    ];
    let diagnostics = bad.iter().all(|(name, text)| {
        let p = dir.join(name);
        std::fs::File::create(&p).unwrap().write_all(text.as_bytes()).unwrap();
        let out = run(["prolong", "parse", p.to_str().unwrap()]);
        let tail = out.stderr.trim_start_matches(p.to_str().unwrap());
        let mut parts = tail.trim_start_matches(':').splitn(3, ':');
        let numeric = |s: Option<&str>| s.is_some_and(|s| s.trim().parse::<usize>().is_ok());
        out.code == 2 && numeric(parts.next()) && numeric(parts.next())
    });
    Line {
        n: 10,
        ok: fixpoints && diagnostics,
        text: format!("emit/parse fixpoint on 3 built-ins: {fixpoints}; malformed files exit 2 with line:col: {diagnostics}"),
    }
}

#[test]
fn acceptance() {
    let lines = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    for l in &lines {
        println!("criterion {:>2}: {}  {}", l.n, if l.ok { "PASS" } else { "FAIL" }, l.text);
    }
    let failing: Vec<usize> = lines.iter().filter(|l| !l.ok).map(|l| l.n).collect();
    assert!(failing.is_empty(), "failing criteria: {failing:?}");
}
