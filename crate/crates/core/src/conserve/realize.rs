use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{FormExpr, Gen, GenKind};
use crate::prolong::Pfaffian;
use crate::scalar::{Derivations, Scalar};

/// One-forms written as `a dx + b dt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization1D {
    pub forms: BTreeMap<Gen, (Scalar, Scalar)>,
}

pub fn dx() -> Gen {
    Gen::diff("x")
}

pub fn dt() -> Gen {
    Gen::diff("t")
}

impl Realization1D {
    pub fn new() -> Self {
        Realization1D { forms: BTreeMap::new() }
    }

    pub fn with(mut self, omega: &str, a: Scalar, b: Scalar) -> Self {
        self.forms.insert(Gen::omega(omega), (a, b));
        self
    }

    /// `ω1 = a1 dx + b1 dt`, `ω2 = a2 dx + b2 dt`, `ω3 = η dx + b3 dt`.
    pub fn standard() -> Self {
        Realization1D::new()
            .with("w1", Scalar::var("a1"), Scalar::var("b1"))
            .with("w2", Scalar::var("a2"), Scalar::var("b2"))
            .with("w3", Scalar::var("eta"), Scalar::var("b3"))
    }

    /// Replace every realized generator; any other one-form generator that
    /// is not `dx`, `dt` or a pseudopotential differential is an error.
    pub fn realize(&self, f: &FormExpr) -> Result<FormExpr> {
        for g in f.gens() {
            if g.kind == GenKind::Omega && !self.forms.contains_key(&g) {
                return Err(Error::Substitution(format!("no realization for {}", g.label())));
            }
        }
        let map = self
            .forms
            .iter()
            .map(|(g, (a, b))| (g.clone(), &FormExpr::gen(dx()).scale(a) + &FormExpr::gen(dt()).scale(b)))
            .collect();
        Ok(f.substitute_gens(&map))
    }

    /// `(F, G)` of a realized Pfaffian form `dy + F dx + G dt`.
    pub fn split(&self, p: &Pfaffian) -> Result<(Scalar, Scalar)> {
        let r = self.realize(&p.rest())?;
        for g in r.gens() {
            if g != dx() && g != dt() {
                return Err(Error::Substitution(format!("`{}` is not a form in dx, dt", r)));
            }
        }
        Ok((r.coefficient(&[dx()]), r.coefficient(&[dt()])))
    }
}

impl Default for Realization1D {
    fn default() -> Self {
        Realization1D::new()
    }
}

/// x-part of a realized chart form: `y,x + F` with `F` its `dx` coefficient.
pub fn riccati_x_part(r: &Realization1D, chart: &Pfaffian) -> Result<Scalar> {
    let (f, _) = r.split(chart)?;
    Ok(&Scalar::symbol(chart.var.tagged('x')) + &f)
}

/// Density `I` and current `J` of `σ = I dx + J dt`, with the defect
/// `∂t I − ∂x J` that vanishes exactly when `dσ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservationPair {
    pub density: Scalar,
    pub current: Scalar,
    pub defect: Scalar,
}

impl ConservationPair {
    pub fn is_conserved(&self) -> bool {
        self.defect.is_zero()
    }
}

pub fn conservation_pair(sigma: &FormExpr, ctx: &Derivations) -> Result<ConservationPair> {
    for (word, _) in sigma.terms() {
        if word.len() != 1 || (word[0] != dx() && word[0] != dt()) {
            return Err(Error::InvalidInput(format!("`{}` is not a one-form in dx, dt", sigma)));
        }
    }
    let density = sigma.coefficient(&[dx()]);
    let current = sigma.coefficient(&[dt()]);
    let defect = &ctx.derive(&density, "t")? - &ctx.derive(&current, "x")?;
    Ok(ConservationPair { density, current, defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{load_system, parse_form, parse_scalar};
    use crate::prolong::{extend_sl2, pfaffians, riccati_chart};

    fn alpha3() -> Pfaffian {
        let p = pfaffians(&load_system("sl2r").unwrap());
        riccati_chart(&p, 1).unwrap().forms[0].clone()
    }

    #[test]
    fn riccati_x_part_of_the_chart() {
        let got = riccati_x_part(&Realization1D::standard(), &alpha3()).unwrap();
        let want = &Scalar::var("y3,x") + &parse_scalar("2*a1*y3 + a2*y3^2 - eta").unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn riccati_x_part_without_coefficients() {
        let r = Realization1D::new()
            .with("w1", Scalar::zero(), Scalar::zero())
            .with("w2", Scalar::zero(), Scalar::zero())
            .with("w3", Scalar::var("eta"), Scalar::var("b3"));
        assert_eq!(riccati_x_part(&r, &alpha3()).unwrap(), &Scalar::var("y3,x") - &Scalar::var("eta"));
    }

    #[test]
    fn missing_realization() {
        let r = Realization1D::new().with("w1", Scalar::var("a1"), Scalar::zero());
        assert!(matches!(riccati_x_part(&r, &alpha3()), Err(Error::Substitution(_))));
    }

    #[test]
    fn sigma_x_part() {
        let e = extend_sl2(&pfaffians(&load_system("sl2r").unwrap())).unwrap();
        let s = Realization1D::standard().realize(&e.sigmas[0]).unwrap();
        assert_eq!(s.coefficient(&[dx()]), parse_scalar("a1 + a2*y3").unwrap());
    }

    #[test]
    fn trivial_pairs() {
        let ctx = Derivations::default();
        let p = conservation_pair(&FormExpr::gen(dx()), &ctx).unwrap();
        assert!(p.is_conserved());
        assert_eq!((p.density, p.current), (Scalar::one(), Scalar::zero()));
        let f = parse_form("x*t*dx").unwrap();
        let q = conservation_pair(&f, &ctx).unwrap();
        assert_eq!(q.defect, Scalar::var("x"));
        assert!(conservation_pair(&parse_form("w1").unwrap(), &ctx).is_err());
    }
}
