use std::collections::BTreeMap;

use crate::catalog::SystemSpec;
use crate::error::Result;
use crate::exterior::{FormExpr, Gen, MatrixForm, StructureTable};
use crate::scalar::{Scalar, Symbol};

/// A Pfaffian form `α = dy + P` with `P` free of `dy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pfaffian {
    pub gen: Gen,
    pub var: Symbol,
    pub form: FormExpr,
}

impl Pfaffian {
    pub fn new(gen: Gen, var: Symbol, form: FormExpr) -> Self {
        Pfaffian { gen, var, form }
    }

    pub fn dy(&self) -> Gen {
        Gen::diff(self.var.name())
    }

    /// `P = α − dy`.
    pub fn rest(&self) -> FormExpr {
        &self.form - &FormExpr::gen(self.dy())
    }

    /// `dy` written through its generator: `α − P`.
    pub fn dy_in_basis(&self) -> FormExpr {
        &FormExpr::gen(self.gen.clone()) - &self.rest()
    }
}

/// Pfaffian forms over a system, with the table their derivatives need.
#[derive(Clone, Debug)]
pub struct PfaffianSet {
    pub forms: Vec<Pfaffian>,
    pub thetas: Vec<Gen>,
    pub table: StructureTable,
    /// Matrix size of the owning system.
    pub dim: usize,
}

impl PfaffianSet {
    pub fn vars(&self) -> Vec<Symbol> {
        self.forms.iter().map(|p| p.var.clone()).collect()
    }

    /// `dy_k ↦ α_k − P_k`.
    pub fn to_basis_map(&self) -> BTreeMap<Gen, FormExpr> {
        self.forms.iter().map(|p| (p.dy(), p.dy_in_basis())).collect()
    }

    /// `α_k ↦ dy_k + P_k`.
    pub fn from_basis_map(&self) -> BTreeMap<Gen, FormExpr> {
        self.forms.iter().map(|p| (p.gen.clone(), p.form.clone())).collect()
    }

    pub fn d(&self, i: usize) -> Result<FormExpr> {
        self.table.d(&self.forms[i].form)
    }
}

/// `Θ = dΩ − Ω∧Ω`.
pub fn curvature(omega: &MatrixForm, t: &StructureTable) -> Result<MatrixForm> {
    omega.expect_degree(1, "connection entry")?;
    omega.d(t)?.sub(&omega.wedge(omega)?)
}

/// `dΘ − Ω∧Θ + Θ∧Ω`, zero for a consistent table.
pub fn bianchi_defect(omega: &MatrixForm, theta: &MatrixForm, t: &StructureTable) -> Result<MatrixForm> {
    theta.d(t)?.sub(&omega.wedge(theta)?)?.add(&theta.wedge(omega)?)
}

/// `α_i = dy_i − Ω_ij y_j`, named `al1..aln`.
pub fn pfaffians(sys: &SystemSpec) -> PfaffianSet {
    let n = sys.dim;
    let forms = (0..n)
        .map(|i| {
            let var = sys.pseudos[i].clone();
            let mut f = FormExpr::gen(Gen::diff(var.name()));
            for (j, y) in sys.pseudos.iter().enumerate() {
                f = &f - &sys.connection.get(i, j).scale(&Scalar::symbol(y.clone()));
            }
            Pfaffian::new(Gen::alpha(&format!("al{}", i + 1)), var, f)
        })
        .collect();
    PfaffianSet { forms, thetas: sys.thetas.clone(), table: sys.table.clone(), dim: n }
}

/// `−Θ_ij y_j + Ω_ij∧α_j`, the closure every `dα_i` must equal.
pub fn linear_closure(sys: &SystemSpec, set: &PfaffianSet, i: usize) -> FormExpr {
    let mut f = FormExpr::zero();
    for (j, p) in set.forms.iter().enumerate() {
        let y = Scalar::symbol(p.var.clone());
        f = &f - &sys.theta_matrix.get(i, j).scale(&y);
        f = &f + &sys.connection.get(i, j).wedge(&FormExpr::gen(p.gen.clone()));
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{load_system, parse_form};

    #[test]
    fn sl2_pfaffians() {
        let s = load_system("sl2r").unwrap();
        let p = pfaffians(&s);
        assert_eq!(p.forms.len(), 2);
        assert_eq!(p.forms[0].form, parse_form("dy1 - w1*y1 - w2*y2").unwrap());
        assert_eq!(p.forms[1].form, parse_form("dy2 - w3*y1 + w1*y2").unwrap());
    }

    #[test]
    fn o3_pfaffian_reads_back() {
        let s = load_system("o3").unwrap();
        let p = pfaffians(&s);
        // dy1 = α1 − y2ω1 + y3ω2
        assert_eq!(p.forms[0].dy_in_basis(), parse_form("al1 - y2*w1 + y3*w2").unwrap());
    }

    #[test]
    fn substitution_round_trip() {
        let s = load_system("su3").unwrap();
        let p = pfaffians(&s);
        for f in &p.forms {
            let there = f.form.substitute_gens(&p.to_basis_map());
            assert_eq!(there, FormExpr::gen(f.gen.clone()));
            assert_eq!(there.substitute_gens(&p.from_basis_map()), f.form);
        }
    }

    #[test]
    fn curvature_of_sl2() {
        let s = load_system("sl2r").unwrap();
        let th = curvature(&s.connection, &s.table).unwrap();
        assert_eq!(th, s.theta_matrix);
        assert_eq!(th.get(0, 0), &parse_form("th1").unwrap());
        let z = MatrixForm::zeros(2, 2);
        assert!(curvature(&z, &s.table).unwrap().is_zero());
    }

    #[test]
    fn bianchi_holds_for_builtins() {
        for name in ["sl2r", "o3", "su3"] {
            let s = load_system(name).unwrap();
            assert!(bianchi_defect(&s.connection, &s.theta_matrix, &s.table).unwrap().is_zero(), "{name}");
        }
    }
}
