use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use prolong_core::catalog::{builtin_text, parse_system, BUILTIN_NAMES};
use prolong_core::conserve::{
    density_residuals, density_solve_constant, residual_scaling_check, GridFn, DEFAULT_TRANSIENT_SPAN,
};
use prolong_core::exterior::FormExpr;
use prolong_core::prolong::{pfaffians, riccati_chart, trace_closure};
use prolong_core::scalar::{ratio_to_f64, Rational};
use serde_json::Value;

use crate::report::{CheckResult, Report, Section, Status};
use crate::suites::{parse_groups, run_checks};

/// Slope tolerance for the residual scaling report.
pub const SLOPE_TOLERANCE: f64 = 0.15;
pub const DEFAULT_ETAS: [f64; 4] = [10.0, 20.0, 40.0, 80.0];
pub const DEFAULT_ORDER: usize = 3;
/// Grid used when both coefficients are constants.
pub const DEFAULT_GRID: (f64, f64, usize) = (0.0, 0.01, 3001);

#[derive(Parser, Debug)]
#[command(name = "prolong", version, about = "Prolongation structures: verification, charts and conserved densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run check groups against a built-in system or a `.eds` file.
    Verify {
        /// sl2r, o3, su3, all, or a path to a system description.
        #[arg(long, default_value = "all")]
        system: String,
        /// Comma-separated groups or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Render one Riccati chart with its sub-connection, trace and closures.
    Derive {
        #[arg(long)]
        system: String,
        #[arg(long)]
        pivot: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Conserved densities and residual scaling for given a1, a2.
    Conserve {
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        order: Option<usize>,
        /// Comma-separated eta values.
        #[arg(long)]
        etas: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parse a system description and check that emitting it reparses to the same system.
    Parse { file: String },
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(msg: impl Into<String>) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }

    fn report(r: &Report, format: Format) -> Self {
        let stdout = match format {
            Format::Json => r.to_json() + "\n",
            _ => r.to_text(),
        };
        Outcome { code: if r.has_failures() { 1 } else { 0 }, stdout, stderr: String::new() }
    }
}

/// Parse arguments (the first is the program name) and run the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match cli.command {
        Command::Verify { system, checks, format } => verify(&system, &checks, format),
        Command::Derive { system, pivot, format } => derive(&system, pivot, format),
        Command::Conserve { coeffs, order, etas, format } => conserve(&coeffs, order, etas.as_deref(), format),
        Command::Parse { file } => parse(&file),
    }
}

/// Built-in name or path to a description file.
pub fn load(selector: &str) -> Result<prolong_core::catalog::SystemSpec, String> {
    let text = match builtin_text(selector) {
        Some(t) => t.to_string(),
        None if Path::new(selector).is_file() => {
            std::fs::read_to_string(selector).map_err(|e| format!("cannot read {selector}: {e}"))?
        }
        None => {
            return Err(format!("unknown system `{selector}` (expected {} or a file)", BUILTIN_NAMES.join(", ")))
        }
    };
    parse_system(&text).map_err(|e| format!("{selector}: {e}"))
}

pub fn verify(system: &str, checks: &str, format: Format) -> Outcome {
    let groups = match parse_groups(checks) {
        Ok(g) => g,
        Err(e) => return Outcome::input_error(e),
    };
    let selectors: Vec<&str> = if system == "all" { BUILTIN_NAMES.to_vec() } else { vec![system] };
    let mut systems = Vec::new();
    for s in selectors {
        match load(s) {
            Ok(sys) => systems.push(sys),
            Err(e) => return Outcome::input_error(e),
        }
    }
    let names = systems.iter().map(|s| s.name.clone()).collect();
    let results: Vec<CheckResult> = systems.into_iter().flat_map(|s| run_checks(s, &groups)).collect();
    Outcome::report(&Report::new("verify", names, results), format)
}

/// Rewrite plain linear notation into LaTeX-like markup, token by token.
pub fn latex(s: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let split = word.find(|c: char| c.is_ascii_digit()).unwrap_or(word.len());
            let (stem, idx) = word.split_at(split);
            let head = match stem {
                "w" => "\\omega",
                "Omega" => "\\Omega",
                "al" | "at" => "\\alpha",
                "th" => "\\theta",
                "dy" => "dy",
                "exp" => "\\exp",
                "sqrt" if idx == "3" => {
                    out.push_str("\\sqrt{3}");
                    continue;
                }
                _ => stem,
            };
            out.push_str(head);
            if !idx.is_empty() {
                out.push_str(&format!("_{{{idx}}}"));
            }
            continue;
        }
        match c {
            '^' if chars.get(i + 1).is_some_and(|n| n.is_ascii_digit() || *n == '-') => {
                let start = i + 1;
                i += 2;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let e: String = chars[start..i].iter().collect();
                out.push_str(&format!("^{{{e}}}"));
                continue;
            }
            '^' => out.push_str(" \\wedge "),
            '*' => out.push(' '),
            _ => out.push(c),
        }
        i += 1;
    }
    out
}

pub fn derive(system: &str, pivot: usize, format: Format) -> Outcome {
    let sys = match load(system) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(e),
    };
    let set = pfaffians(&sys);
    let chart = match riccati_chart(&set, pivot) {
        Ok(c) => c,
        Err(e) => return Outcome::input_error(e.to_string()),
    };
    let trace = match trace_closure(&chart) {
        Ok(t) => t,
        Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let fmt = |f: &FormExpr| if format == Format::Latex { latex(&f.to_string()) } else { f.to_string() };
    let name = |s: &str| if format == Format::Latex { latex(s) } else { s.to_string() };

    let ratios = chart
        .ratios
        .iter()
        .map(|r| name(&format!("{} = {}/{}", r.var, sys.pseudos[r.numer - 1], sys.pseudos[r.denom - 1])))
        .collect();
    let forms = chart.forms.iter().map(|f| format!("{} = {}", name(&f.gen.name.to_string()), fmt(&f.form))).collect();
    let m = chart.connection.rows();
    let mut connection = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let label = format!("Omega{pivot}[{},{}]", i + 1, j + 1);
            connection.push(format!("{} = {}", name(&label), fmt(chart.connection.get(i, j))));
        }
    }
    let mut closures: Vec<String> = chart
        .closures
        .iter()
        .zip(&chart.forms)
        .map(|(d, f)| format!("d{} = {}", name(&f.gen.name.to_string()), fmt(&d.reassemble())))
        .collect();
    let certified = chart.closures.iter().all(|d| d.is_member()) && trace.is_member();
    closures.push(format!("d(trace)/{} = {}", chart.dim, fmt(&trace.reassemble())));

    let sections = vec![
        Section { title: format!("{} chart {pivot}: ratios", sys.name), lines: ratios },
        Section { title: "forms".into(), lines: forms },
        Section { title: "sub-connection".into(), lines: connection },
        Section { title: "trace".into(), lines: vec![fmt(&chart.trace)] },
        Section { title: "closures".into(), lines: closures },
    ];
    let check = CheckResult::new(
        &sys.name,
        format!("{}/derive/chart{pivot}", sys.name),
        if certified { Status::Pass } else { Status::Fail },
        format!("{} forms", chart.forms.len()),
        "identity",
    );
    let report = sections.into_iter().fold(Report::new("derive", vec![sys.name.clone()], vec![check]), Report::with_section);
    match format {
        Format::Json => Outcome::report(&report, Format::Json),
        _ => {
            let mut o = Outcome::report(&report, Format::Text);
            if format == Format::Latex {
                o.stdout = o.stdout.replace("==", "%");
            }
            o
        }
    }
}

/// Exact rational from a JSON number's decimal text.
pub fn decimal_rational(text: &str) -> Result<Rational, String> {
    let bad = || format!("`{text}` is not a decimal number");
    let (mant, exp) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], text[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-shift) as usize))
    })
}

/// A coefficient from the input file.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Constant(Rational),
    Grid(GridFn),
}

fn number(v: &Value, what: &str) -> Result<f64, String> {
    v.as_f64().ok_or_else(|| format!("`{what}` must be a number"))
}

fn coefficient(doc: &Value, key: &str) -> Result<Coefficient, String> {
    let v = doc.get(key).ok_or_else(|| format!("missing \"{key}\""))?;
    if let Some(c) = v.get("const") {
        let Value::Number(n) = c else { return Err(format!("\"{key}.const\" must be a number")) };
        return decimal_rational(&n.to_string()).map(Coefficient::Constant);
    }
    if let Some(g) = v.get("grid") {
        let vals = g
            .as_array()
            .ok_or_else(|| format!("\"{key}.grid\" must be an array"))?
            .iter()
            .map(|x| number(x, key))
            .collect::<Result<Vec<_>, _>>()?;
        let x0 = v.get("x0").map(|x| number(x, "x0")).transpose()?.unwrap_or(0.0);
        let h = number(v.get("h").ok_or_else(|| format!("\"{key}\" grid needs \"h\""))?, "h")?;
        return GridFn::new(x0, h, vals).map(Coefficient::Grid).map_err(|e| e.to_string());
    }
    Err(format!("\"{key}\" needs a \"const\" or \"grid\" entry"))
}

fn on_grid(c: &Coefficient, like: Option<&GridFn>) -> Result<GridFn, String> {
    match c {
        Coefficient::Grid(g) => Ok(g.clone()),
        Coefficient::Constant(r) => {
            let (x0, h, n) = like.map(|g| (g.x0(), g.h(), g.len())).unwrap_or(DEFAULT_GRID);
            GridFn::constant(ratio_to_f64(r), x0, h, n).map_err(|e| e.to_string())
        }
    }
}

pub fn conserve(path: &str, order: Option<usize>, etas: Option<&str>, format: Format) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(format!("cannot read {path}: {e}")),
    };
    match conserve_text(&text, order, etas) {
        Ok(r) => Outcome::report(&r, format),
        Err(e) => Outcome::input_error(format!("{path}: {e}")),
    }
}

/// The `conserve` report for a coefficient document.
pub fn conserve_text(text: &str, order: Option<usize>, etas: Option<&str>) -> Result<Report, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("{}:{}: {e}", e.line(), e.column()))?;
    let a1 = coefficient(&doc, "a1")?;
    let a2 = coefficient(&doc, "a2")?;
    let order = match order {
        Some(n) => n,
        None => match doc.get("N") {
            Some(v) => v.as_u64().ok_or("\"N\" must be a positive integer")? as usize,
            None => DEFAULT_ORDER,
        },
    };
    if order == 0 {
        return Err("order must be at least 1".into());
    }
    let etas: Vec<f64> = match etas {
        Some(csv) => csv
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad eta `{s}`")))
            .collect::<Result<_, _>>()?,
        None => match doc.get("etas") {
            Some(v) => v
                .as_array()
                .ok_or("\"etas\" must be an array")?
                .iter()
                .map(|x| number(x, "etas"))
                .collect::<Result<_, _>>()?,
            None => DEFAULT_ETAS.to_vec(),
        },
    };

    let mut sections = Vec::new();
    let mut checks = Vec::new();
    if let (Coefficient::Constant(c1), Coefficient::Constant(c2)) = (&a1, &a2) {
        let s = density_solve_constant(order, c1, c2).map_err(|e| e.to_string())?;
        let lines = s.densities.iter().enumerate().map(|(n, d)| format!("I{} = {d}", n + 1)).collect();
        sections.push(Section { title: format!("densities a1 = {c1}, a2 = {c2}"), lines });
        let res = density_residuals(&s).map_err(|e| e.to_string())?;
        let ok = res.iter().all(|r| r.is_zero());
        let mut r = CheckResult::new("conserve", "conserve/recursion".into(), if ok { Status::Pass } else { Status::Fail }, format!("{order} equations"), "identity");
        if !ok {
            r = r.diff(res.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
        }
        checks.push(r);
    }

    let g1 = on_grid(&a1, None)?;
    let g2 = on_grid(&a2, Some(&g1))?;
    let min_a1 = g1.values().iter().copied().fold(f64::INFINITY, f64::min);
    if !(min_a1 > 0.0) {
        return Err("a1 must be positive on the grid".into());
    }
    let window = DEFAULT_TRANSIENT_SPAN / (2.0 * min_a1);
    if !matches!((&a1, &a2), (Coefficient::Constant(_), Coefficient::Constant(_))) {
        let ys = prolong_core::conserve::solve_density_odes(&g1, &g2, order).map_err(|e| e.to_string())?;
        let last = g1.len() - 1;
        let step = (last / 10).max(1);
        let mut lines = vec![format!("{:>10}  {}", "x", (1..=order).map(|n| format!("{:>14}", format!("I{n}"))).collect::<String>())];
        for k in (0..=last).step_by(step) {
            let row: String = ys.iter().map(|y| format!("{:>14.6e}", g2.values()[k] * y.values()[k])).collect();
            lines.push(format!("{:>10.4}  {row}", g1.x(k)));
        }
        sections.push(Section { title: "densities on the grid".into(), lines });
    }
    let scaling = residual_scaling_check(&g1, &g2, order, &etas, window).map_err(|e| e.to_string())?;
    let slope = scaling.slope.map(|s| format!("{s:.4}")).unwrap_or_else(|| "none (zero residual)".into());
    let ok = scaling.within(SLOPE_TOLERANCE);
    let mut r = CheckResult::new(
        "conserve",
        format!("conserve/residual-slope-N{order}"),
        if ok { Status::Pass } else { Status::Fail },
        slope,
        "tolerance",
    )
    .expected(format!("{} +- {SLOPE_TOLERANCE}", scaling.expected));
    if !ok {
        r = r.diff(format!("residuals {:?}", scaling.residuals));
    }
    checks.push(r);
    sections.push(Section {
        title: format!("residuals past x = {:.4}", g1.x0() + window),
        lines: scaling.etas.iter().zip(&scaling.residuals).map(|(e, r)| format!("eta = {e}: {r:.6e}")).collect(),
    });
    Ok(sections.into_iter().fold(Report::new("conserve", vec!["conserve".into()], checks), Report::with_section))
}

pub fn parse(file: &str) -> Outcome {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(format!("cannot read {file}: {e}")),
    };
    let sys = match parse_system(&text) {
        Ok(s) => s,
        Err(prolong_core::Error::Parse(p)) => {
            return Outcome { code: 2, stdout: String::new(), stderr: format!("{file}:{p}\n") }
        }
        Err(e) => return Outcome::input_error(format!("{file}: {e}")),
    };
    let emitted = sys.emit();
    match parse_system(&emitted) {
        Ok(again) if again == sys && again.emit() == emitted => {
            Outcome { code: 0, stdout: emitted, stderr: String::new() }
        }
        Ok(_) => Outcome { code: 1, stdout: emitted, stderr: "error: emitted description reparses differently\n".into() },
        Err(e) => Outcome { code: 1, stdout: emitted, stderr: format!("error: emitted description does not reparse: {e}\n") },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(decimal_rational("0.1").unwrap(), BigRational::new(1.into(), 10.into()));
        assert_eq!(decimal_rational("2.5e2").unwrap(), BigRational::from_integer(250.into()));
        assert_eq!(decimal_rational("-3").unwrap(), BigRational::from_integer((-3).into()));
        assert_eq!(decimal_rational("1e-3").unwrap(), BigRational::new(1.into(), 1000.into()));
        assert!(decimal_rational("abc").is_err());
    }

    #[test]
    fn latex_tokens() {
        assert_eq!(latex("y3^2*w2 - al3^w1"), "y_{3}^{2} \\omega_{2} - \\alpha_{3} \\wedge \\omega_{1}");
        assert_eq!(latex("exp(-2*y5)*th1"), "\\exp(-2 y_{5}) \\theta_{1}");
    }

    #[test]
    fn missing_a2_is_input_error() {
        assert!(conserve_text(r#"{"a1": {"const": 1}}"#, Some(2), None).unwrap_err().contains("a2"));
    }

    #[test]
    fn constant_densities() {
        let r = conserve_text(r#"{"a1": {"const": 1}, "a2": {"const": 1}, "N": 3}"#, None, None).unwrap();
        assert_eq!(r.sections[0].lines, ["I1 = 1/2", "I2 = -1/8", "I3 = 1/16"]);
        assert!(!r.has_failures(), "{}", r.to_text());
    }
}
