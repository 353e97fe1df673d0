use super::chart::{riccati_chart, RiccatiChart};
use super::decompose::{closure_decompose, Basis, IdealDecomposition};
use super::pfaffian::{Pfaffian, PfaffianSet};
use crate::error::{Error, Result};
use crate::exterior::{FormExpr, Gen, StructureTable};
use crate::scalar::{rat, Coeff, Monomial, Scalar, Symbol};

/// Integrating the two 2×2 charts: `dy_{σ} = σ_i` potentials for the
/// chart traces, and `dy = e^{−2y_σ} q_i` for the quadratic coefficients.
#[derive(Clone, Debug)]
pub struct Sl2Extension {
    pub charts: [RiccatiChart; 2],
    /// `σ_i = −½ tr Ω_c` of each chart.
    pub sigmas: Vec<FormExpr>,
    pub dsigmas: Vec<IdealDecomposition>,
    pub forms: Vec<Pfaffian>,
    pub closures: Vec<IdealDecomposition>,
    pub table: StructureTable,
}

impl Sl2Extension {
    pub fn basis(&self) -> Basis {
        let mut alphas: Vec<Pfaffian> = self.charts.iter().flat_map(|c| c.forms.iter().cloned()).collect();
        alphas.extend(self.forms.iter().cloned());
        Basis::new(alphas, self.charts[0].thetas.clone())
    }
}

/// Coefficient of `v²` in the non-differential part of a chart form.
fn quadratic_part(p: &Pfaffian) -> FormExpr {
    let v = &p.var;
    let sq = Monomial::var(v.clone(), 2);
    let mut out = FormExpr::zero();
    for (word, c) in p.rest().terms() {
        let picked = Scalar::from_terms(
            c.terms()
                .filter(|(m, _)| m.power_of(v) == 2)
                .map(|(m, k)| (m.divide(&sq).expect("power two"), k.clone())),
        );
        out = &out + &FormExpr::word(picked, word.clone());
    }
    out
}

pub fn extend_sl2(set: &PfaffianSet) -> Result<Sl2Extension> {
    if set.forms.len() != 2 {
        return Err(Error::WrongDimension(format!(
            "the extension needs a 2x2 system, got {}x{}",
            set.forms.len(),
            set.forms.len()
        )));
    }
    let charts = [riccati_chart(set, 1)?, riccati_chart(set, 2)?];
    let mut table = charts[0].table.clone();
    table.extend(&charts[1].table);

    let last = charts[1].ratios.last().expect("one ratio per chart");
    let start = last.var.name().trim_start_matches('y').parse::<usize>().expect("numbered chart variable") + 1;
    let new = |k: usize| (Symbol::new(&format!("y{}", start + k)), Gen::alpha(&format!("al{}", start + k)));

    let half = Coeff::from_ratio(-1, 2);
    let sigmas: Vec<FormExpr> = charts.iter().map(|c| c.trace.scale_coeff(&half)).collect();

    let mut forms = Vec::new();
    for (k, s) in sigmas.iter().enumerate() {
        let (v, g) = new(k);
        table.add_coordinate(v.name());
        forms.push(Pfaffian::new(g, v.clone(), &FormExpr::gen(Gen::diff(v.name())) - s));
    }
    for k in 0..2 {
        let (v, g) = new(k + 2);
        table.add_coordinate(v.name());
        let damp = Scalar::exp(forms[k].var.clone(), rat(-2, 1));
        let q = quadratic_part(&charts[k].forms[0]).scale(&damp);
        forms.push(Pfaffian::new(g, v.clone(), &FormExpr::gen(Gen::diff(v.name())) - &q));
    }

    let mut ext = Sl2Extension { charts, sigmas, dsigmas: vec![], forms, closures: vec![], table };
    let basis = ext.basis();
    ext.dsigmas = ext
        .sigmas
        .iter()
        .map(|s| closure_decompose(&ext.table.d(s)?, &basis))
        .collect::<Result<_>>()?;
    ext.closures = ext
        .forms
        .iter()
        .map(|f| closure_decompose(&ext.table.d(&f.form)?, &basis))
        .collect::<Result<_>>()?;
    Ok(ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{load_system, parse_form};
    use crate::prolong::pfaffian::pfaffians;

    fn ext() -> Sl2Extension {
        extend_sl2(&pfaffians(&load_system("sl2r").unwrap())).unwrap()
    }

    #[test]
    fn sigma_forms() {
        let e = ext();
        assert_eq!(e.sigmas[0], parse_form("w1 + y3*w2").unwrap());
        assert_eq!(e.sigmas[1], parse_form("-w1 + y4*w3").unwrap());
    }

    #[test]
    fn extension_forms() {
        let e = ext();
        let names: Vec<_> = e.forms.iter().map(|f| f.gen.name.to_string()).collect();
        assert_eq!(names, ["al5", "al6", "al7", "al8"]);
        assert_eq!(e.forms[2].form, parse_form("dy7 - exp(-2*y5)*w2").unwrap());
        assert_eq!(e.forms[3].form, parse_form("dy8 - exp(-2*y6)*w3").unwrap());
    }

    #[test]
    fn closures_are_members() {
        let e = ext();
        assert!(e.dsigmas.iter().chain(&e.closures).all(|d| d.is_member()));
        assert_eq!(e.dsigmas[0].reassemble(), parse_form("th1 + y3*th2 + al3^w2").unwrap());
        assert_eq!(e.closures[2].reassemble(), parse_form("2*exp(-2*y5)*al5^w2 - exp(-2*y5)*th2").unwrap());
    }

    #[test]
    fn rejects_other_sizes() {
        let p = pfaffians(&load_system("o3").unwrap());
        assert!(matches!(extend_sl2(&p), Err(Error::WrongDimension(_))));
    }
}
