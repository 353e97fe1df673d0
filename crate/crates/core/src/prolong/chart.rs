use std::collections::{BTreeMap, BTreeSet};

use super::decompose::{closure_decompose, Basis, IdealDecomposition};
use super::pfaffian::{curvature, Pfaffian, PfaffianSet};
use crate::error::{Error, Result};
use crate::exterior::{FormExpr, Gen, MatrixForm, StructureTable};
use crate::scalar::{Coeff, Scalar, Symbol};

/// `var = y_numer / y_denom`, one-based indices into the original
/// pseudopotentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioDef {
    pub var: Symbol,
    pub numer: usize,
    pub denom: usize,
}

/// Projective chart on `y_pivot ≠ 0`.
#[derive(Clone, Debug)]
pub struct RiccatiChart {
    pub pivot: usize,
    pub ratios: Vec<RatioDef>,
    pub forms: Vec<Pfaffian>,
    /// Sub-connection: the Pfaffian-coefficient matrix of the forms' closures.
    pub connection: MatrixForm,
    pub trace: FormExpr,
    pub closures: Vec<IdealDecomposition>,
    pub thetas: Vec<Gen>,
    pub table: StructureTable,
    pub dim: usize,
}

impl RiccatiChart {
    pub fn basis(&self) -> Basis {
        Basis::new(self.forms.clone(), self.thetas.clone())
    }

    pub fn vars(&self) -> Vec<Symbol> {
        self.ratios.iter().map(|r| r.var.clone()).collect()
    }

    /// Highest total degree of any coefficient in the chart variables.
    pub fn degree_bound(&self) -> i32 {
        let vars: BTreeSet<Symbol> = self.vars().into_iter().collect();
        self.forms
            .iter()
            .flat_map(|p| p.form.terms().map(|(_, c)| c.degree_in(&vars)).collect::<Vec<_>>())
            .max()
            .unwrap_or(0)
    }
}

/// Index of the first ratio variable of a chart: the charts of an `n`-dim
/// system use `y_{n+1}, y_{n+2}, ...`, `n−1` per pivot in pivot order.
pub fn first_ratio_index(n: usize, pivot: usize) -> usize {
    n + 1 + (pivot - 1) * (n - 1)
}

/// Build the chart: `y_p² α_new = y_p α_j − y_j α_p`, rewritten in the ratios
/// `r_j = y_j / y_p` and divided exactly by `y_p²`.
pub fn riccati_chart(set: &PfaffianSet, pivot: usize) -> Result<RiccatiChart> {
    let n = set.forms.len();
    if pivot == 0 || pivot > n {
        return Err(Error::InvalidPivot { pivot, dim: n });
    }
    if n < 2 {
        return Err(Error::WrongDimension("charts need at least two pseudopotentials".into()));
    }
    let p = &set.forms[pivot - 1];
    let yp = Scalar::symbol(p.var.clone());
    let existing: BTreeSet<Symbol> = set.table.symbol_entries().map(|(s, _)| s.clone()).collect();

    let mut ratios = Vec::new();
    let mut syms = BTreeMap::new();
    let mut gens = BTreeMap::new();
    let base = first_ratio_index(n, pivot);
    for (k, j) in (1..=n).filter(|&j| j != pivot).enumerate() {
        let var = Symbol::new(&format!("y{}", base + k));
        if existing.contains(&var) {
            return Err(Error::DuplicateName(var.to_string()));
        }
        let yj = &set.forms[j - 1].var;
        let r = Scalar::symbol(var.clone());
        syms.insert(yj.clone(), &r * &yp);
        gens.insert(
            Gen::diff(yj.name()),
            &FormExpr::gen(Gen::diff(p.var.name())).scale(&r) + &FormExpr::gen(Gen::diff(var.name())).scale(&yp),
        );
        ratios.push(RatioDef { var, numer: j, denom: pivot });
    }

    let mut table = set.table.clone();
    let mut forms = Vec::new();
    for rd in &ratios {
        let aj = &set.forms[rd.numer - 1];
        let yj = Scalar::symbol(aj.var.clone());
        let numer = &aj.form.scale(&yp) - &p.form.scale(&yj);
        let numer = numer.substitute(&syms, &gens)?;
        let form = numer.map_coeffs(|c| {
            c.div_power_exact(&p.var, 2)
                .ok_or_else(|| Error::ExactDivision(format!("`{}` by {}^2", c, p.var)))
        })?;
        if form.symbols().contains(&p.var) || form.gens().contains(&Gen::diff(p.var.name())) {
            return Err(Error::ExactDivision(format!("`{}` still depends on {}", form, p.var)));
        }
        table.add_coordinate(rd.var.name());
        forms.push(Pfaffian::new(Gen::alpha(&format!("al{}", rd.var.name().trim_start_matches('y'))), rd.var.clone(), form));
    }

    let basis = Basis::new(forms.clone(), set.thetas.clone());
    let closures = forms
        .iter()
        .map(|f| closure_decompose(&table.d(&f.form)?, &basis))
        .collect::<Result<Vec<_>>>()?;
    let m = forms.len();
    let connection = MatrixForm::new(m, m, closures.iter().flat_map(|d| d.a.iter().cloned()).collect())?;
    let trace = connection.trace()?;

    Ok(RiccatiChart {
        pivot,
        ratios,
        forms,
        connection,
        trace,
        closures,
        thetas: set.thetas.clone(),
        table,
        dim: n,
    })
}

/// Curvature of a chart's sub-connection, rewritten in the chart basis, with
/// the decomposition of every entry.
#[derive(Clone, Debug)]
pub struct SubCurvature {
    pub matrix: MatrixForm,
    pub entries: Vec<IdealDecomposition>,
}

pub fn subchart_curvature(c: &RiccatiChart) -> Result<SubCurvature> {
    let th = curvature(&c.connection, &c.table)?;
    let basis = c.basis();
    let entries = th.entries().iter().map(|f| closure_decompose(f, &basis)).collect::<Result<Vec<_>>>()?;
    let matrix = MatrixForm::new(th.rows(), th.cols(), entries.iter().map(|d| d.expressed.clone()).collect())?;
    Ok(SubCurvature { matrix, entries })
}

/// Decompose `d(tr Ω_c) / n`, `n` the size of the owning system.
pub fn trace_closure(c: &RiccatiChart) -> Result<IdealDecomposition> {
    let scale = Coeff::from_ratio(1, c.dim as i64);
    closure_decompose(&c.table.d(&c.trace)?.scale_coeff(&scale), &c.basis())
}

/// Pfaffian forms `α̃_j = dy_j − (Ω_c)_jk y_k` of the linear problem carried
/// by a chart's sub-connection.
#[derive(Clone, Debug)]
pub struct SubsystemSet {
    pub forms: Vec<Pfaffian>,
    pub closures: Vec<IdealDecomposition>,
    /// `Ω_c∧α̃ − Θ_c y` in the enlarged basis, one per form.
    pub expected: Vec<FormExpr>,
    pub table: StructureTable,
}

impl SubsystemSet {
    pub fn matches_shape(&self) -> Vec<bool> {
        self.closures.iter().zip(&self.expected).map(|(d, e)| &d.expressed == e).collect()
    }
}

pub fn subsystem_pfaffians(c: &RiccatiChart) -> Result<SubsystemSet> {
    let m = c.connection.rows();
    let vars: Vec<Symbol> = (1..=m).map(|j| Symbol::new(&format!("y{}_{}", c.pivot, j))).collect();
    let gens: Vec<Gen> = (1..=m).map(|j| Gen::alpha(&format!("at{}_{}", c.pivot, j))).collect();
    let mut table = c.table.clone();
    let mut forms = Vec::new();
    for j in 0..m {
        table.add_coordinate(vars[j].name());
        let mut f = FormExpr::gen(Gen::diff(vars[j].name()));
        for (k, y) in vars.iter().enumerate() {
            f = &f - &c.connection.get(j, k).scale(&Scalar::symbol(y.clone()));
        }
        forms.push(Pfaffian::new(gens[j].clone(), vars[j].clone(), f));
    }

    let mut all = c.forms.clone();
    all.extend(forms.iter().cloned());
    let basis = Basis::new(all, c.thetas.clone());
    let sub_th = subchart_curvature(c)?.matrix;
    let mut closures = Vec::new();
    let mut expected = Vec::new();
    for j in 0..m {
        closures.push(closure_decompose(&table.d(&forms[j].form)?, &basis)?);
        let mut e = FormExpr::zero();
        for k in 0..m {
            e = &e + &c.connection.get(j, k).wedge(&FormExpr::gen(gens[k].clone()));
            e = &e - &sub_th.get(j, k).scale(&Scalar::symbol(vars[k].clone()));
        }
        expected.push(basis.express(&e));
    }
    Ok(SubsystemSet { forms, closures, expected, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{load_system, parse_form};
    use crate::prolong::pfaffian::pfaffians;

    fn chart(name: &str, pivot: usize) -> RiccatiChart {
        riccati_chart(&pfaffians(&load_system(name).unwrap()), pivot).unwrap()
    }

    #[test]
    fn sl2_first_chart() {
        let c = chart("sl2r", 1);
        assert_eq!(c.forms[0].form, parse_form("dy3 - w3 + 2*y3*w1 + y3^2*w2").unwrap());
        assert_eq!(c.forms[0].gen, Gen::alpha("al3"));
    }

    #[test]
    fn sl2_second_chart() {
        let c = chart("sl2r", 2);
        assert_eq!(c.forms[0].form, parse_form("dy4 - w2 - 2*y4*w1 + y4^2*w3").unwrap());
    }

    #[test]
    fn o3_first_chart() {
        let c = chart("o3", 1);
        assert_eq!(c.connection.get(0, 0), &parse_form("2*y4*w1 - y5*w2").unwrap());
        assert_eq!(c.trace, parse_form("3*y4*w1 - 3*y5*w2").unwrap());
        assert_eq!(c.degree_bound(), 2);
    }

    #[test]
    fn o3_second_chart_ratio_names() {
        let c = chart("o3", 2);
        let names: Vec<_> = c.ratios.iter().map(|r| (r.var.to_string(), r.numer)).collect();
        assert_eq!(names, vec![("y6".to_string(), 1), ("y7".to_string(), 3)]);
    }

    #[test]
    fn su3_first_chart() {
        let c = chart("su3", 1);
        let want = parse_form("-2*w3 - 2*y4*(w1 - i*w2) - y5*(w4 - i*w5)").unwrap();
        assert_eq!(c.connection.get(0, 0), &want);
    }

    #[test]
    fn pivot_out_of_range() {
        let p = pfaffians(&load_system("sl2r").unwrap());
        assert_eq!(riccati_chart(&p, 5).unwrap_err(), Error::InvalidPivot { pivot: 5, dim: 2 });
    }

    #[test]
    fn o3_sub_curvature_entry() {
        let c = chart("o3", 1);
        let sc = subchart_curvature(&c).unwrap();
        assert_eq!(sc.matrix.get(0, 1), &parse_form("-y4*th2 - th3 - al4^w2").unwrap());
        assert!(sc.entries.iter().all(|d| d.is_member()));
    }

    #[test]
    fn o3_trace_closure() {
        let c = chart("o3", 1);
        let d = trace_closure(&c).unwrap();
        assert_eq!(d.reassemble(), parse_form("y4*th1 - y5*th2 - w1^al4 + w2^al5").unwrap());
    }

    #[test]
    fn subsystem_forms() {
        let c = chart("o3", 1);
        let s = subsystem_pfaffians(&c).unwrap();
        let want = parse_form("dy1_1 - (2*y4*w1 - y5*w2)*y1_1 - (-y4*w2 - w3)*y1_2").unwrap();
        assert_eq!(s.forms[0].form, want);
        assert!(s.closures.iter().all(|d| d.is_member()));
        assert!(s.matches_shape().iter().all(|&b| b));
    }
}
