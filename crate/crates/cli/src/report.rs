use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The computation certified itself but disagrees with the printed formula.
    Discrepancy,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Discrepancy => "discrepancy",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub system: String,
    pub id: String,
    pub status: Status,
    pub computed: String,
    /// What the computation was compared with, when there is a printed form.
    pub expected: Option<String>,
    /// Where the expectation comes from: `printed`, `identity` or `tolerance`.
    pub source: String,
    pub diff: Option<String>,
    pub millis: f64,
}

impl CheckResult {
    pub fn new(system: &str, id: String, status: Status, computed: String, source: &str) -> Self {
        CheckResult {
            system: system.to_string(),
            id,
            status,
            computed,
            expected: None,
            source: source.to_string(),
            diff: None,
            millis: 0.0,
        }
    }

    pub fn expected(mut self, e: impl Into<String>) -> Self {
        self.expected = Some(e.into());
        self
    }

    pub fn diff(mut self, d: impl Into<String>) -> Self {
        self.diff = Some(d.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub discrepancy: usize,
}

impl Summary {
    pub fn tally(checks: &[CheckResult]) -> Self {
        let count = |s| checks.iter().filter(|c| c.status == s).count();
        Summary {
            total: checks.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            discrepancy: count(Status::Discrepancy),
        }
    }
}

/// Free-form lines attached to a report (derived forms, density tables).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub systems: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &str, systems: Vec<String>, checks: Vec<CheckResult>) -> Self {
        let summary = Summary::tally(&checks);
        Report {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            systems,
            checks,
            summary,
            sections: vec![],
        }
    }

    pub fn with_section(mut self, s: Section) -> Self {
        self.sections.push(s);
        self
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Discrepancy)
    }

    pub fn find(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    /// The report with every timing zeroed.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.millis = 0.0;
        }
        r
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            let _ = writeln!(out, "== {}", s.title);
            for l in &s.lines {
                let _ = writeln!(out, "  {l}");
            }
        }
        for c in &self.checks {
            let _ = writeln!(out, "[{:<11}] {}  {}", c.status.label(), c.id, c.computed);
            if c.status != Status::Pass {
                if let Some(e) = &c.expected {
                    let _ = writeln!(out, "{:>16}printed:  {e}", "");
                }
                if let Some(d) = &c.diff {
                    let _ = writeln!(out, "{:>16}diff:     {d}", "");
                }
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} checks: {} pass, {} fail, {} discrepancy",
            s.total, s.pass, s.fail, s.discrepancy
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let a = CheckResult::new("o3", "o3/closure/dal1".into(), Status::Pass, "w1".into(), "identity");
        let mut b = CheckResult::new("o3", "o3/charts/ratio/y7".into(), Status::Discrepancy, "y3/y2".into(), "printed")
            .expected("y3/y1")
            .diff("denominator y2 vs y1");
        b.millis = 0.125;
        Report::new("verify", vec!["o3".into()], vec![a, b])
    }

    #[test]
    fn summary_matches_list() {
        let r = sample();
        assert_eq!(r.summary, Summary { total: 2, pass: 1, fail: 0, discrepancy: 1 });
        assert!(!r.has_failures());
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let j = r.to_json();
        let back = Report::from_json(&j).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), j);
    }

    #[test]
    fn text_lists_printed_form_for_findings() {
        let t = sample().to_text();
        assert!(t.contains("printed:  y3/y1"));
        assert!(t.ends_with("2 checks: 1 pass, 0 fail, 1 discrepancy\n"));
    }
}
