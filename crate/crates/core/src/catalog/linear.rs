use crate::error::{Error, Result};
use crate::exterior::FormExpr;
use crate::scalar::Coeff;

/// Left inverse `K` of a full-column-rank matrix `M` (`K·M = I`), by exact
/// Gauss-Jordan elimination on `[M | I]`.
pub fn left_inverse(m: &[Vec<Coeff>]) -> Result<Vec<Vec<Coeff>>> {
    let rows = m.len();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    let mut a: Vec<Vec<Coeff>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..rows).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }));
            row
        })
        .collect();
    let mut pivot_row = Vec::with_capacity(cols);
    let mut r = 0;
    for c in 0..cols {
        let p = (r..rows)
            .find(|&i| !a[i][c].is_zero())
            .ok_or_else(|| Error::Inconsistent(format!("generator {} is linearly dependent", c + 1)))?;
        a.swap(r, p);
        let inv = a[r][c].inv().expect("pivot is nonzero");
        a[r] = a[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let sub: Vec<Coeff> = a[r].iter().map(|x| x * &f).collect();
                for (x, s) in a[i].iter_mut().zip(sub) {
                    *x = &*x - &s;
                }
            }
        }
        pivot_row.push(r);
        r += 1;
    }
    Ok(pivot_row.into_iter().map(|r| a[r][cols..].to_vec()).collect())
}

/// Solve `M·c = v` for forms `c` given a left inverse of `M`, and confirm the
/// solution reproduces `v` exactly.
pub fn solve_forms(m: &[Vec<Coeff>], k: &[Vec<Coeff>], v: &[FormExpr]) -> Option<Vec<FormExpr>> {
    let c: Vec<FormExpr> = k.iter().map(|row| combine(row, v)).collect();
    let ok = m.iter().zip(v).all(|(row, ve)| (&combine(row, &c) - ve).is_zero());
    ok.then_some(c)
}

fn combine(row: &[Coeff], v: &[FormExpr]) -> FormExpr {
    row.iter()
        .zip(v)
        .filter(|(a, _)| !a.is_zero())
        .fold(FormExpr::zero(), |acc, (a, f)| &acc + &f.scale_coeff(a))
}
