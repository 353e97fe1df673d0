use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Derivations, Rational, Scalar, Symbol};
use num_traits::Zero;

/// Coefficients `Y1..YN` of `y3 = Σ η^{−n} Yn` and the densities
/// `In = a2 Yn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensitySeries {
    pub order: usize,
    /// `E1 = Y1,x + 2a1Y1 − 1`, `En = Yn,x + 2a1Yn + a2 Σ_{k=1}^{n−1} Y_{n−k} Y_k`.
    pub equations: Vec<Scalar>,
    /// Solved coefficients; empty when only the equations are known.
    pub solution: Vec<Scalar>,
    pub densities: Vec<Scalar>,
}

pub fn y_symbol(n: usize) -> Symbol {
    Symbol::new(&format!("Y{n}"))
}

fn convolution(n: usize, y: impl Fn(usize) -> Scalar) -> Scalar {
    (1..n).fold(Scalar::zero(), |acc, k| &acc + &(&y(n - k) * &y(k)))
}

pub fn density_equations(order: usize) -> Result<DensitySeries> {
    if order == 0 {
        return Err(Error::InvalidInput("density order must be at least 1".into()));
    }
    let a1 = Scalar::var("a1");
    let a2 = Scalar::var("a2");
    let y = |n: usize| Scalar::symbol(y_symbol(n));
    let equations = (1..=order)
        .map(|n| {
            let lin = &Scalar::symbol(y_symbol(n).tagged('x')) + &(&Scalar::int(2) * &(&a1 * &y(n)));
            if n == 1 {
                &lin - &Scalar::one()
            } else {
                &lin + &(&a2 * &convolution(n, y))
            }
        })
        .collect();
    let densities = (1..=order).map(|n| &a2 * &y(n)).collect();
    Ok(DensitySeries { order, equations, solution: vec![], densities })
}

fn solve(order: usize, a1_inv: Scalar, a2: Scalar) -> Result<DensitySeries> {
    let mut s = density_equations(order)?;
    let half = Coeff::from_ratio(1, 2);
    let mut ys: Vec<Scalar> = vec![a1_inv.scale(&half)];
    let factor = (&a2 * &a1_inv).scale(&Coeff::from_ratio(-1, 2));
    for n in 2..=order {
        let c = convolution(n, |k| ys[k - 1].clone());
        ys.push(&factor * &c);
    }
    s.densities = ys.iter().map(|y| &a2 * y).collect();
    s.solution = ys;
    Ok(s)
}

/// Stationary closed forms as Laurent polynomials in the symbols `a1`, `a2`.
pub fn density_solve_symbolic(order: usize) -> Result<DensitySeries> {
    let inv = Scalar::var("a1").inv_monomial().expect("a symbol is a monomial");
    solve(order, inv, Scalar::var("a2"))
}

/// Stationary closed forms for constant `a1 ≠ 0`, `a2`.
pub fn density_solve_constant(order: usize, a1: &Rational, a2: &Rational) -> Result<DensitySeries> {
    if a1.is_zero() {
        return Err(Error::InvalidInput("stationary densities need a1 != 0".into()));
    }
    let inv = Scalar::constant(Coeff::from_rational(a1.recip()));
    let mut s = solve(order, inv, Scalar::constant(Coeff::from_rational(a2.clone())))?;
    let values: BTreeMap<Symbol, Scalar> = [
        (Symbol::new("a1"), Scalar::constant(Coeff::from_rational(a1.clone()))),
        (Symbol::new("a2"), Scalar::constant(Coeff::from_rational(a2.clone()))),
    ]
    .into_iter()
    .collect();
    s.equations = s.equations.iter().map(|e| e.substitute(&values)).collect::<Result<_>>()?;
    Ok(s)
}

/// Each defining equation with its solution (and the x-derivatives of the
/// solution, `a1`, `a2` constant) substituted.
pub fn density_residuals(s: &DensitySeries) -> Result<Vec<Scalar>> {
    if s.solution.len() != s.order {
        return Err(Error::InvalidInput("density series has no solution to check".into()));
    }
    let ctx = Derivations::new(&['x']).with_constants(["a1", "a2"]);
    let mut map = BTreeMap::new();
    for (n, y) in s.solution.iter().enumerate() {
        let sym = y_symbol(n + 1);
        map.insert(sym.tagged('x'), ctx.derive(y, "x")?);
        map.insert(sym, y.clone());
    }
    s.equations.iter().map(|e| e.substitute(&map)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_scalar;
    use crate::scalar::rat;

    fn yx(n: usize) -> Scalar {
        Scalar::symbol(y_symbol(n).tagged('x'))
    }

    #[test]
    fn equations_as_stated() {
        let s = density_equations(3).unwrap();
        assert_eq!(s.equations[0], &yx(1) + &parse_scalar("2*a1*Y1 - 1").unwrap());
        assert_eq!(s.equations[1], &yx(2) + &parse_scalar("2*a1*Y2 + a2*Y1^2").unwrap());
        assert_eq!(s.equations[2], &yx(3) + &parse_scalar("2*a1*Y3 + 2*a2*Y1*Y2").unwrap());
        assert_eq!(s.densities[1], parse_scalar("a2*Y2").unwrap());
        assert!(density_equations(0).is_err());
    }

    #[test]
    fn symbolic_closed_forms() {
        let s = density_solve_symbolic(3).unwrap();
        assert_eq!(s.solution[0], parse_scalar("1/2*a1^-1").unwrap());
        assert_eq!(s.solution[1], parse_scalar("-1/8*a2*a1^-3").unwrap());
        assert_eq!(s.solution[2], parse_scalar("1/16*a2^2*a1^-5").unwrap());
        assert_eq!(s.densities[2], parse_scalar("1/16*a2^3*a1^-5").unwrap());
    }

    #[test]
    fn closed_forms_satisfy_the_recursion() {
        for n in 1..=6 {
            let s = density_solve_symbolic(n).unwrap();
            assert!(density_residuals(&s).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn unit_constants() {
        let s = density_solve_constant(3, &rat(1, 1), &rat(1, 1)).unwrap();
        let got: Vec<_> = s.densities.iter().map(|d| d.to_string()).collect();
        assert_eq!(got, ["1/2", "-1/8", "1/16"]);
        assert!(density_residuals(&s).unwrap().iter().all(Scalar::is_zero));
        assert!(density_solve_constant(2, &rat(0, 1), &rat(1, 1)).is_err());
    }
}
