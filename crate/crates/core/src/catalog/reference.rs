//! Closed forms as they appear in the published derivations of the three
//! built-in systems, kept verbatim (typos included) as comparison targets.
//!
//! Expressions use the crate's conventional names and the abbreviations
//! `w12p = w1 + i*w2`, `w12m = w1 - i*w2` (likewise `45`, `67`, and `th..`
//! for curvature generators), expanded by [`expand`] before parsing.

use super::dsl::parse_form;
use super::system::Algebra;
use crate::error::ParseError;
use crate::exterior::FormExpr;

/// One printed object: a short label and its expression text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Printed {
    pub label: &'static str,
    pub text: &'static str,
}

impl Printed {
    pub fn form(&self) -> Result<FormExpr, ParseError> {
        parse_form(&expand(self.text))
    }
}

const fn p(label: &'static str, text: &'static str) -> Printed {
    Printed { label, text }
}

/// A ratio definition `var = numer/denom` between original pseudopotentials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub var: &'static str,
    pub numer: usize,
    pub denom: usize,
}

const fn r(var: &'static str, numer: usize, denom: usize) -> Ratio {
    Ratio { var, numer, denom }
}

#[derive(Clone, Debug, Default)]
pub struct Reference {
    /// `dω_l` written with the curvature generators.
    pub structure: Vec<Printed>,
    pub pfaffians: Vec<Printed>,
    /// `dα_i` for the original Pfaffian forms.
    pub closures: Vec<Printed>,
    pub ratios: Vec<Ratio>,
    /// Riccati forms of every chart, pivot by pivot.
    pub charts: Vec<Printed>,
    /// Complete closures of chart forms (2×2 case).
    pub chart_closures: Vec<Printed>,
    /// Curvature-generator part of each chart form's closure.
    pub chart_thetas: Vec<Printed>,
    /// Sub-connection of each chart, row-major.
    pub sub_connections: Vec<[Printed; 4]>,
    /// Curvature of a chart's sub-connection: (pivot, row-major entries).
    pub sub_curvatures: Vec<(usize, [Printed; 4])>,
    /// One third of the exterior derivative of each chart trace.
    pub traces: Vec<Printed>,
    pub extension: Option<ExtensionReference>,
}

/// The 2×2 extension chain: σ forms, their derivatives, and the four
/// extension forms with their closures.
#[derive(Clone, Debug, Default)]
pub struct ExtensionReference {
    pub sigmas: Vec<Printed>,
    pub dsigmas: Vec<Printed>,
    pub forms: Vec<Printed>,
    pub closures: Vec<Printed>,
}

/// Expand `w12p`-style abbreviations.
pub fn expand(text: &str) -> String {
    let mut out = String::with_capacity(text.len() * 2);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_ascii_alphabetic() && (i == 0 || !(chars[i - 1].is_ascii_alphanumeric() || chars[i - 1] == '_')) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push_str(&expand_word(&word).unwrap_or(word));
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

fn expand_word(w: &str) -> Option<String> {
    let (prefix, rest) = if let Some(r) = w.strip_prefix("th") {
        ("th", r)
    } else {
        ("w", w.strip_prefix('w')?)
    };
    let b = rest.as_bytes();
    if b.len() != 3 || !b[0].is_ascii_digit() || !b[1].is_ascii_digit() {
        return None;
    }
    let sign = match b[2] {
        b'p' => '+',
        b'm' => '-',
        _ => return None,
    };
    Some(format!("({p}{} {sign} i*{p}{})", b[0] as char, b[1] as char, p = prefix))
}

pub fn reference(algebra: Algebra) -> Option<Reference> {
    match algebra {
        Algebra::Sl2r => Some(sl2r()),
        Algebra::O3 => Some(o3()),
        Algebra::Su3 => Some(su3()),
        Algebra::Custom => None,
    }
}

fn sl2r() -> Reference {
    Reference {
        structure: vec![
            p("dw1", "th1 + w2^w3"),
            p("dw2", "th2 + 2*w1^w2"),
            p("dw3", "th3 - 2*w1^w3"),
        ],
        pfaffians: vec![p("al1", "dy1 - w1*y1 - w2*y2"), p("al2", "dy2 - w3*y1 + w1*y2")],
        closures: vec![
            p("dal1", "w1^al1 + w2^al2 - y1*th1 - y2*th2"),
            p("dal2", "-w1^al2 + w3^al1 + y2*th1 - y1*th3"),
        ],
        ratios: vec![r("y3", 2, 1), r("y4", 1, 2)],
        charts: vec![
            p("al3", "dy3 - w3 + 2*y3*w1 + y3^2*w2"),
            p("al4", "dy4 - w2 - 2*y4*w1 + y4^2*w3"),
        ],
        chart_closures: vec![
            p("dal3", "2*y3*th1 + y3^2*th2 - th3 + 2*al3^(w1 + y3*w2)"),
            p("dal4", "-2*y4*th1 - th2 + y4^2*th3 + 2*al4^(-w1 + y4*w3)"),
        ],
        chart_thetas: vec![],
        sub_connections: vec![],
        sub_curvatures: vec![],
        traces: vec![],
        extension: Some(ExtensionReference {
            sigmas: vec![p("sigma1", "w1 + y3*w2"), p("sigma2", "-w1 + y4*w3")],
            dsigmas: vec![
                p("dsigma1", "th1 + y3*th2 + al3^w2"),
                p("dsigma2", "-th1 + y3*th2 + al4^w2"),
            ],
            forms: vec![
                p("al5", "dy5 - w1 - y3*w2"),
                p("al6", "dy6 + w1 - y4*w3"),
                p("al7", "dy7 - exp(-2*y5)*w2"),
                p("al8", "dy8 - exp(-2*y6)*w3"),
            ],
            closures: vec![
                p("dal5", "-th1 - y3*th3 - al3^w2"),
                p("dal6", "th1 - y4*th3 - al4^w3"),
                p("dal7", "2*exp(-2*y5)*al5^w2 - exp(-2*y5)*th2"),
                p("dal8", "2*exp(-2*y6)*al6^w3 - exp(-2*y6)*th3"),
            ],
        }),
    }
}

fn o3() -> Reference {
    Reference {
        structure: vec![
            p("dw1", "th1 - w2^w3"),
            p("dw2", "th2 - w3^w1"),
            p("dw3", "th3 - w1^w2"),
        ],
        pfaffians: vec![
            p("al1", "dy1 + y2*w1 - y3*w2"),
            p("al2", "dy2 - y1*w1 + y3*w3"),
            p("al3", "dy3 + y1*w2 - y2*w3"),
        ],
        closures: vec![
            p("dal1", "y2*th1 - y3*th2 - w1^al2 + w2^al3"),
            p("dal2", "-y1*th1 + y3*th3 + w1^al1 - w3^al3"),
            p("dal3", "y1*th2 - y2*th3 - w2^al1 + w3^al2"),
        ],
        ratios: vec![r("y4", 2, 1), r("y5", 3, 1), r("y6", 1, 2), r("y7", 3, 1), r("y8", 1, 3), r("y9", 2, 3)],
        charts: vec![
            p("al4", "dy4 - (1 + y4^2)*w1 + y4*y5*w2 + y5*w3"),
            p("al5", "dy5 - y4*y5*w1 + (1 + y5^2)*w2 - y4*w3"),
            p("al6", "dy6 + (1 + y6^2)*w1 - y7*w2 - y6*y7*w3"),
            p("al7", "dy7 + y6*y7*w1 + y6*w2 - (1 + y7^2)*w3"),
            p("al8", "dy8 + y9*w1 - (1 + y8^2)*w2 + y8*y9*w3"),
            p("al9", "dy9 - y8*w1 - y8*y9*w2 + (1 + y9^2)*w3"),
        ],
        chart_closures: vec![],
        chart_thetas: vec![
            p("dal4", "-(1 + y4^2)*th1 + y4*y5*th2 + y5*th3"),
            p("dal5", "-y4*y5*th1 + (1 + y5^2)*th2 - y4*th3"),
            p("dal6", "(1 + y6^2)*th1 - y7*th2 - y6*y7*th3"),
            p("dal7", "y6*y7*th1 + y6*th2 - (1 + y7^2)*th3"),
            p("dal8", "y1*th1 - (1 + y8^2)*th2 + y8*y9*th3"),
            p("dal9", "-y8*th1 - y8*y9*th2 + (1 + y9^2)*th3"),
        ],
        sub_connections: vec![
            [
                p("Omega1[1,1]", "2*y4*w1 - y5*w2"),
                p("Omega1[1,2]", "-y4*w2 - w3"),
                p("Omega1[2,1]", "y5*w1 + w3"),
                p("Omega1[2,2]", "y4*w1 - 2*y5*w2"),
            ],
            [
                p("Omega2[1,1]", "-2*y6*w1 + y7*w3"),
                p("Omega2[1,2]", "w2 + y6*w3"),
                p("Omega2[2,1]", "-y7*w1 - w6"),
                p("Omega2[2,2]", "-y6*w1 + 2*y7*w3"),
            ],
            [
                p("Omega3[1,1]", "2*y8*w2 - y9*w3"),
                p("Omega3[1,2]", "-w1 - y9*w3"),
                p("Omega3[2,1]", "w1 + y9*w2"),
                p("Omega3[2,2]", "y8*w2 - 2*y9*w3"),
            ],
        ],
        sub_curvatures: vec![(
            1,
            [
                p("Theta1[1,1]", "2*y4*th1 - y5*th2 + 2*al4^w1 - al5^w2"),
                p("Theta1[1,2]", "-y4*th2 - th3 - al4^w2"),
                p("Theta1[2,1]", "y5*th1 + th3 + al5^w1"),
                p("Theta1[2,2]", "y4*th1 - 2*y5*th2 + al4^w1 - 2*al5^w2"),
            ],
        )],
        traces: vec![
            p("dkappa1/3", "y4*th1 - y5*th2 - w1^al4 + w2^al5"),
            p("dkappa2/3", "-y6*th1 + y7*th3 + w1^al6 - w3^al7"),
            p("dkappa3/3", "y8*th2 - y9*th3 - w2^al8 + w3^al9"),
        ],
        extension: None,
    }
}

fn su3() -> Reference {
    Reference {
        structure: vec![
            p("dw1", "th1 + 2*i*w2^w3 + i*w4^w7 - i*w5^w6"),
            p("dw2", "th2 - 2*i*w1^w3 + i*w4^w6 + i*w5^w7"),
            p("dw3", "th3 + 2*i*w1^w2 + i*w4^w5 - i*w6^w7"),
            p("dw4", "th4 - i*w1^w7 - i*w2^w6 - i*w3^w5 + sqrt3*i*w5^w8"),
            p("dw5", "th5 + i*w1^w6 - i*w2^w7 + i*w3^w4 - sqrt3*i*w4^w8"),
            p("dw6", "th6 - i*w1^w5 + i*w2^w4 + i*w3^w7 + sqrt3*i*w7^w8"),
            p("dw7", "th7 + i*w1^w4 + i*w2^w5 - i*w3^w6 - sqrt3*i*w6^w8"),
            p("dw8", "th8 + sqrt3*i*w4^w5 + sqrt3*i*w6^w7"),
        ],
        pfaffians: vec![
            p("al1", "dy1 - (w3 + 1/3*sqrt3*w8)*y1 - w12m*y2 - w45m*y3"),
            p("al2", "dy2 - w12p*y1 + (w3 - 1/3*sqrt3*w8)*y2 - w67m*y3"),
            p("al3", "dy3 - w45p*y1 - w67p*y2 + 2/3*sqrt3*w8*y3"),
        ],
        closures: vec![
            p(
                "dal1",
                "-y2*th12m - y1*th3 - y3*th45m - 1/3*sqrt3*y1*th8 \
                 + (w3 + 1/3*sqrt3*w8)^al1 + w12m^al2 + w45m^al3",
            ),
            p(
                "dal2",
                "-y1*th12p + y2*th3 - 1/3*sqrt3*y2*th8 - y3*th67m \
                 + w12p^al1 - (w3 - 1/3*sqrt3*w8)^al2 + w67m^al3",
            ),
            p(
                "dal3",
                "-y1*th45p - y2*th67p + 2/3*sqrt3*y3*th8 + w45p^al1 + w67p^al2 - 2/3*sqrt3*w8^al3",
            ),
        ],
        ratios: vec![],
        charts: vec![
            p("al4", "dy4 - w12p + 2*y4*w3 + y4^2*w12m - y5*w67m + y4*y5*w45m"),
            p("al5", "dy5 - w45p + y5*(w3 + sqrt3*w8) + y5^2*w45m - y4*w67p + y4*y5*w12m"),
            p("al6", "dy6 - w12m - 2*y6*w3 + y6^2*w12p - y7*w45m + y6*y7*w67m"),
            p("al7", "dy7 - w67p - y7*(w3 - sqrt3*w8) + y7^2*w67m - y6*w45p + y6*y7*w12p"),
            p("al8", "dy8 - w45m - y8*(w3 + sqrt3*w8) + y8^2*w45p - y9*w12m + y8*y9*w67p"),
            p("al9", "dy9 - w67m + y9*(w3 - sqrt3*w8) + y9^2*w67p - y8*w12p + y8*y9*w45p"),
        ],
        chart_closures: vec![],
        chart_thetas: vec![
            p("dal4", "(y4^2 - 1)*th1 - i*(y4^2 + 1)*th2 + 2*y4*th3 + y4*y5*th45m - y5*th67m"),
            p(
                "dal5",
                "y4*y5*th12m + y5*th3 + (y4^2 - 1)*th4 - i*(y5^2 + 1)*th5 - y4*th67p + sqrt3*y5*th8",
            ),
            p("dal6", "(y6^2 - 1)*th1 + i*(y6^2 + 1)*th2 - 2*y6*th3 - y7*th45m + y6*y7*th67m"),
            p(
                "dal7",
                "y6*y7*th12p - y7*th3 - y6*th45p + (y7^2 - 1)*th6 - i*(y7^2 + 1)*th7 + sqrt3*y7*th8",
            ),
            p(
                "dal8",
                "-y9*th12m - y8*th3 + (y8^2 - 1)*th4 + i*(y8^2 + 1)*th5 + y8*y9*th67p - sqrt3*y8*th8",
            ),
            p(
                "dal9",
                "-y8*th12p + y9*th3 + y8*y9*th45p + (y9^2 - 1)*th6 + i*(y9^2 + 1)*th7 - sqrt3*y9*th8",
            ),
        ],
        sub_connections: vec![
            [
                p("Omega1[1,1]", "-2*w3 - 2*y4*w12m - y5*w45m"),
                p("Omega1[1,2]", "w67m - y4*w45m"),
                p("Omega1[2,1]", "w67p - y5*w12m"),
                p("Omega1[2,2]", "-w3 - sqrt3*w8 - y4*w12m - 2*y5*w45m"),
            ],
            [
                p("Omega2[1,1]", "2*w3 - 2*y6*w12p - y7*w67m"),
                p("Omega2[1,2]", "w45m - y6*w67m"),
                p("Omega2[2,1]", "w45p - y7*w12p"),
                p("Omega2[2,2]", "w3 - sqrt3*w8 - y6*w12p - 2*y7*w67m"),
            ],
            [
                p("Omega3[1,1]", "w3 + sqrt3*w8 - 2*y8*w45p - y9*w67p"),
                p("Omega3[1,2]", "w12m - y8*w67p"),
                p("Omega3[2,1]", "w12p - y9*w45p"),
                p("Omega3[2,2]", "-w3 + sqrt3*w8 - y8*w45p - 2*y9*w67p"),
            ],
        ],
        sub_curvatures: vec![
            (
                1,
                [
                    p("xi1[1,1]", "2*w12p^al4 + w45m^al5 - 2*y4*th12m - 2*th3 - y5*th45m"),
                    p("xi1[1,2]", "w45m^al4 - y4*th45m + th67m"),
                    p("xi1[2,1]", "w12m^al5 - y5*th12m + th67p"),
                    p("xi1[2,2]", "w12m^al4 + 2*w45m^al5 - y4*th12m - th3 - 2*th45m - sqrt3*th8"),
                ],
            ),
            (
                2,
                [
                    p("xi2[1,1]", "2*w12p^al6 + w67m^al7 - 2*y6*th12p + th3 - y7*th67m"),
                    p("xi2[1,2]", "w67m^al6 + th45m - y6*th67m"),
                    p("xi2[2,1]", "w12p^al7 - y7*th12p + th45p"),
                    p("xi2[2,2]", "w12p^al6 + 2*w67m^al7 - y6*th12p + th3 - 2*y7*th67m - sqrt3*th8"),
                ],
            ),
            (
                3,
                [
                    p("xi3[1,1]", "2*w45p^al8 + w67p^al9 + th3 - 2*y8*th45p - y9*th67p + sqrt3*th8"),
                    p("xi3[1,2]", "w67p^al8 + th12m - y8*th67p"),
                    p("xi3[2,1]", "w45p^al9 + th12p - y9*th45p"),
                    p("xi3[2,2]", "w45p^al8 + 2*w67p^al9 - th3 - y8*th45p - 2*y9*th67p + sqrt3*th8"),
                ],
            ),
        ],
        traces: vec![
            p("dtau1/3", "w12m^al4 + w45m^al5 - y4*th12m - th3 - y5*th45m - 1/3*sqrt3*th8"),
            p("dtau2/3", "w12p^al6 + w67m^al7 - y6*th12p + th3 - y7*th67m - 1/3*sqrt3*th8"),
            p("dtau3/3", "w45p^al8 + w67p^al9 - y8*th45p - y9*th67p + 2/3*sqrt3*th8"),
        ],
        extension: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abbreviations() {
        assert_eq!(expand("y4*w12m + th45p^al4"), "y4*(w1 - i*w2) + (th4 + i*th5)^al4");
        assert_eq!(expand("w3 + dw12m"), "w3 + dw12m");
    }

    #[test]
    fn every_printed_form_parses() {
        for alg in [Algebra::Sl2r, Algebra::O3, Algebra::Su3] {
            let r = reference(alg).unwrap();
            let ext = r.extension.clone().unwrap_or_default();
            let all = r
                .structure
                .iter()
                .chain(&r.pfaffians)
                .chain(&r.closures)
                .chain(&r.charts)
                .chain(&r.chart_closures)
                .chain(&r.chart_thetas)
                .chain(r.sub_connections.iter().flatten())
                .chain(r.sub_curvatures.iter().flat_map(|(_, m)| m.iter()))
                .chain(&r.traces)
                .chain(&ext.sigmas)
                .chain(&ext.dsigmas)
                .chain(&ext.forms)
                .chain(&ext.closures);
            for pr in all {
                pr.form().unwrap_or_else(|e| panic!("{} {}: {}", alg, pr.label, e));
            }
        }
    }
}
