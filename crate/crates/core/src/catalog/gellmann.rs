use std::collections::BTreeMap;

use crate::error::Result;
use crate::exterior::{FormExpr, MatrixForm};
use crate::scalar::{rat, Coeff, Rational, Surd};

pub type CMatrix = Vec<Vec<Coeff>>;

/// The eight Gell-Mann matrices and the su(3) structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GellMannData {
    pub lambdas: Vec<CMatrix>,
    /// Nonzero `f_lmn` with one-based indices, closed under permutation.
    f: BTreeMap<(usize, usize, usize), Coeff>,
}

fn c(n: i64) -> Coeff {
    Coeff::from_int(n)
}

fn sqrt3_times(q: Rational) -> Coeff {
    Coeff::new(Surd::new(rat(0, 1), q), Surd::zero())
}

impl GellMannData {
    pub fn standard() -> Self {
        let z = || Coeff::zero();
        let i = Coeff::i;
        let mut lambdas = vec![vec![vec![z(), z(), z()], vec![z(), z(), z()], vec![z(), z(), z()]]; 8];
        lambdas[0][0][1] = c(1);
        lambdas[0][1][0] = c(1);
        lambdas[1][0][1] = -i();
        lambdas[1][1][0] = i();
        lambdas[2][0][0] = c(1);
        lambdas[2][1][1] = c(-1);
        lambdas[3][0][2] = c(1);
        lambdas[3][2][0] = c(1);
        lambdas[4][0][2] = -i();
        lambdas[4][2][0] = i();
        lambdas[5][1][2] = c(1);
        lambdas[5][2][1] = c(1);
        lambdas[6][1][2] = -i();
        lambdas[6][2][1] = i();
        lambdas[7][0][0] = sqrt3_times(rat(1, 3));
        lambdas[7][1][1] = sqrt3_times(rat(1, 3));
        lambdas[7][2][2] = sqrt3_times(rat(-2, 3));

        let half = Coeff::from_ratio(1, 2);
        let base = [
            ((1, 2, 3), c(1)),
            ((1, 4, 7), half.clone()),
            ((2, 4, 6), half.clone()),
            ((2, 5, 7), half.clone()),
            ((3, 4, 5), half.clone()),
            ((1, 5, 6), -&half),
            ((3, 6, 7), -&half),
            ((4, 5, 8), sqrt3_times(rat(1, 2))),
            ((6, 7, 8), sqrt3_times(rat(1, 2))),
        ];
        let mut f = BTreeMap::new();
        for ((a, b, d), v) in base {
            let neg = -&v;
            for (k, sign) in [((a, b, d), &v), ((b, d, a), &v), ((d, a, b), &v), ((b, a, d), &neg), ((a, d, b), &neg), ((d, b, a), &neg)] {
                f.insert(k, sign.clone());
            }
        }
        GellMannData { lambdas, f }
    }

    pub fn f(&self, l: usize, m: usize, n: usize) -> Coeff {
        self.f.get(&(l, m, n)).cloned().unwrap_or_else(Coeff::zero)
    }

    /// `f` changes sign under every transposition of indices.
    pub fn is_antisymmetric(&self) -> bool {
        (1..=8).all(|l| {
            (1..=8).all(|m| {
                (1..=8).all(|n| {
                    let v = self.f(l, m, n);
                    self.f(m, l, n) == -&v && self.f(l, n, m) == -&v && self.f(n, m, l) == -&v
                })
            })
        })
    }

    /// Pairs `(l, m)`, `l < m`, for which `[λl, λm] = 2i f_lmn λn` fails.
    pub fn commutator_failures(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for l in 1..=8 {
            for m in l + 1..=8 {
                let a = &self.lambdas[l - 1];
                let b = &self.lambdas[m - 1];
                let lhs = sub(&matmul(a, b), &matmul(b, a));
                let two_i = &c(2) * &Coeff::i();
                let rhs = (1..=8).fold(zero3(), |acc, n| add(&acc, &scale(&self.lambdas[n - 1], &(&two_i * &self.f(l, m, n)))));
                if lhs != rhs {
                    bad.push((l, m));
                }
            }
        }
        bad
    }

    /// `dω_l = ϑ_l + i Σ_mn f_lmn ω_m∧ω_n`, from `ϑ_l = dω_l − i f_lmn ω_m∧ω_n`.
    pub fn structure_equation(&self, l: usize, omegas: &[FormExpr], theta: &FormExpr) -> FormExpr {
        let mut acc = theta.clone();
        for m in 1..=8 {
            for n in 1..=8 {
                let v = self.f(l, m, n);
                if !v.is_zero() {
                    acc = &acc + &omegas[m - 1].wedge(&omegas[n - 1]).scale_coeff(&(&Coeff::i() * &v));
                }
            }
        }
        acc
    }
}

fn zero3() -> CMatrix {
    vec![vec![Coeff::zero(); 3]; 3]
}

fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = zero3();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

fn add(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn sub(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn scale(a: &CMatrix, k: &Coeff) -> CMatrix {
    a.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

/// `Σ_l ω_l λ_l`.
pub fn su3_assemble(g: &GellMannData, omegas: &[FormExpr]) -> Result<MatrixForm> {
    let mut entries = vec![FormExpr::zero(); 9];
    for (lam, w) in g.lambdas.iter().zip(omegas) {
        for i in 0..3 {
            for j in 0..3 {
                if !lam[i][j].is_zero() {
                    entries[i * 3 + j] = &entries[i * 3 + j] + &w.scale_coeff(&lam[i][j]);
                }
            }
        }
    }
    MatrixForm::new(3, 3, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Gen;

    #[test]
    fn commutators_hold() {
        let g = GellMannData::standard();
        assert!(g.commutator_failures().is_empty());
        assert!(g.is_antisymmetric());
    }

    #[test]
    fn zero_forms_give_zero_matrix() {
        let g = GellMannData::standard();
        assert!(su3_assemble(&g, &vec![FormExpr::zero(); 8]).unwrap().is_zero());
    }

    #[test]
    fn corner_entry() {
        let g = GellMannData::standard();
        let w: Vec<FormExpr> = (1..=8).map(|k| FormExpr::gen(Gen::omega(&format!("w{}", k)))).collect();
        let m = su3_assemble(&g, &w).unwrap();
        assert_eq!(m.get(2, 2).to_string(), "-2/3*sqrt3*w8");
        assert_eq!(m.get(0, 2).to_string(), "w4 - i*w5");
    }

    #[test]
    fn first_structure_equation() {
        let g = GellMannData::standard();
        let w: Vec<FormExpr> = (1..=8).map(|k| FormExpr::gen(Gen::omega(&format!("w{}", k)))).collect();
        let th = FormExpr::gen(Gen::theta("th1"));
        assert_eq!(g.structure_equation(1, &w, &th).to_string(), "2*i*w2^w3 + i*w4^w7 - i*w5^w6 + th1");
    }
}
