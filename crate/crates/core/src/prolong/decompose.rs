use std::collections::BTreeMap;
use std::fmt;

use super::pfaffian::Pfaffian;
use crate::error::{Error, Result};
use crate::exterior::{FormExpr, Gen, GenKind};
use crate::scalar::Scalar;

/// Generators a decomposition may use: Pfaffian forms and curvature
/// two-forms.
#[derive(Clone, Debug)]
pub struct Basis {
    pub alphas: Vec<Pfaffian>,
    pub thetas: Vec<Gen>,
}

impl Basis {
    pub fn new(alphas: Vec<Pfaffian>, thetas: Vec<Gen>) -> Self {
        Basis { alphas, thetas }
    }

    fn to_basis(&self) -> BTreeMap<Gen, FormExpr> {
        self.alphas.iter().map(|p| (p.dy(), p.dy_in_basis())).collect()
    }

    fn from_basis(&self) -> BTreeMap<Gen, FormExpr> {
        self.alphas.iter().map(|p| (p.gen.clone(), p.form.clone())).collect()
    }

    /// Rewrite every `dy` of a basis variable through its Pfaffian form.
    pub fn express(&self, f: &FormExpr) -> FormExpr {
        let map = self.to_basis();
        let mut cur = f.clone();
        // A Pfaffian's rest may mention another basis differential; a few
        // passes settle it.
        for _ in 0..=self.alphas.len() {
            if !cur.gens().iter().any(|g| map.contains_key(g)) {
                return cur;
            }
            cur = cur.substitute_gens(&map);
        }
        cur
    }

    /// Replace every basis Pfaffian generator by its `dy` form.
    pub fn unexpress(&self, f: &FormExpr) -> FormExpr {
        f.substitute_gens(&self.from_basis())
    }
}

/// `β = Σ_j A_j∧α_j + Σ_l Γ_l ϑ_l + ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDecomposition {
    pub subject: FormExpr,
    /// The subject with every basis `dy` eliminated.
    pub expressed: FormExpr,
    pub alphas: Vec<Gen>,
    pub thetas: Vec<Gen>,
    pub a: Vec<FormExpr>,
    pub gamma: Vec<Scalar>,
    pub remainder: FormExpr,
}

impl IdealDecomposition {
    pub fn is_member(&self) -> bool {
        self.remainder.is_zero()
    }

    pub fn alpha_part(&self) -> FormExpr {
        self.a
            .iter()
            .zip(&self.alphas)
            .fold(FormExpr::zero(), |acc, (a, g)| &acc + &a.wedge(&FormExpr::gen(g.clone())))
    }

    pub fn theta_part(&self) -> FormExpr {
        self.gamma
            .iter()
            .zip(&self.thetas)
            .fold(FormExpr::zero(), |acc, (c, g)| &acc + &FormExpr::gen(g.clone()).scale(c))
    }

    pub fn reassemble(&self) -> FormExpr {
        &(&self.alpha_part() + &self.theta_part()) + &self.remainder
    }

    /// Coefficient form of the named Pfaffian generator.
    pub fn a_of(&self, g: &Gen) -> FormExpr {
        self.alphas.iter().position(|x| x == g).map(|k| self.a[k].clone()).unwrap_or_default()
    }
}

impl fmt::Display for IdealDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reassemble())
    }
}

/// Collect `β` against the basis. Curvature terms go to `Γ`, then terms with
/// a Pfaffian generator go to the column of the last such generator in the
/// word (so `α_j∧α_k`, `j<k`, lands in column `k` with coefficient `α_j`),
/// and everything else is the remainder. The result is certified by
/// reassembly before it is returned.
pub fn closure_decompose(beta: &FormExpr, basis: &Basis) -> Result<IdealDecomposition> {
    let expressed = basis.express(beta);
    let alphas: Vec<Gen> = basis.alphas.iter().map(|p| p.gen.clone()).collect();
    let mut a = vec![FormExpr::zero(); alphas.len()];
    let mut gamma = vec![Scalar::zero(); basis.thetas.len()];
    let mut remainder = FormExpr::zero();

    for (word, c) in expressed.terms() {
        if let [g] = word.as_slice() {
            if let Some(l) = basis.thetas.iter().position(|t| t == g) {
                gamma[l] = &gamma[l] + c;
                continue;
            }
        }
        let has_theta = word.iter().any(|g| g.kind == GenKind::Theta);
        let last_alpha = word.iter().rposition(|g| alphas.contains(g));
        match (has_theta, last_alpha) {
            (false, Some(pos)) => {
                let k = alphas.iter().position(|g| g == &word[pos]).expect("found above");
                let mut rest = word.clone();
                rest.remove(pos);
                // Moving α_k to the end passes the odd generators after it.
                let passed = word[pos + 1..].iter().filter(|g| g.is_odd()).count();
                let coeff = if passed % 2 == 1 { -c } else { c.clone() };
                a[k] = &a[k] + &FormExpr::word(coeff, rest);
            }
            _ => remainder = &remainder + &FormExpr::word(c.clone(), word.clone()),
        }
    }

    let dec = IdealDecomposition {
        subject: beta.clone(),
        expressed,
        alphas,
        thetas: basis.thetas.clone(),
        a,
        gamma,
        remainder,
    };
    let back = basis.unexpress(&dec.reassemble());
    if back != basis.unexpress(beta) {
        return Err(Error::Inconsistent(format!("decomposition of `{}` does not reassemble", beta)));
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{load_system, parse_form};
    use crate::prolong::pfaffian::pfaffians;

    fn basis_for(name: &str) -> (crate::prolong::PfaffianSet, Basis) {
        let s = load_system(name).unwrap();
        let p = pfaffians(&s);
        let b = Basis::new(p.forms.clone(), s.thetas.clone());
        (p, b)
    }

    #[test]
    fn sl2_first_closure() {
        let (p, b) = basis_for("sl2r");
        let dec = closure_decompose(&p.d(0).unwrap(), &b).unwrap();
        assert!(dec.is_member());
        assert_eq!(dec.a, vec![parse_form("w1").unwrap(), parse_form("w2").unwrap()]);
        assert_eq!(dec.gamma, vec![-Scalar::var("y1"), -Scalar::var("y2"), Scalar::zero()]);
        assert_eq!(dec.reassemble(), parse_form("w1^al1 + w2^al2 - y1*th1 - y2*th2").unwrap());
    }

    #[test]
    fn o3_first_closure() {
        let (p, b) = basis_for("o3");
        let dec = closure_decompose(&p.d(0).unwrap(), &b).unwrap();
        assert_eq!(dec.reassemble(), parse_form("y2*th1 - y3*th2 - w1^al2 + w2^al3").unwrap());
    }

    #[test]
    fn non_member() {
        let (_, b) = basis_for("sl2r");
        let beta = parse_form("w1^w2").unwrap();
        let dec = closure_decompose(&beta, &b).unwrap();
        assert!(!dec.is_member());
        assert_eq!(dec.remainder, beta);
    }

    #[test]
    fn alpha_pairs_go_to_the_later_column() {
        let (_, b) = basis_for("sl2r");
        let dec = closure_decompose(&parse_form("al1^al2").unwrap(), &b).unwrap();
        assert_eq!(dec.a[1], parse_form("al1").unwrap());
        assert!(dec.a[0].is_zero());
    }
}
