use std::fmt;

use super::form::FormExpr;
use super::table::StructureTable;
use crate::error::{Error, Result};
use crate::scalar::{Coeff, RelationSet, Scalar};

/// Matrix of forms, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixForm {
    rows: usize,
    cols: usize,
    entries: Vec<FormExpr>,
}

impl MatrixForm {
    pub fn new(rows: usize, cols: usize, entries: Vec<FormExpr>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(MatrixForm { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<FormExpr>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        MatrixForm::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixForm { rows, cols, entries: vec![FormExpr::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatrixForm::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = FormExpr::one();
        }
        m
    }

    /// Matrix of 0-forms.
    pub fn from_scalars(rows: usize, cols: usize, s: Vec<Scalar>) -> Result<Self> {
        MatrixForm::new(rows, cols, s.into_iter().map(FormExpr::scalar).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &FormExpr {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: FormExpr) {
        self.entries[i * self.cols + j] = f;
    }

    pub fn entries(&self) -> &[FormExpr] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[FormExpr] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FormExpr::is_zero)
    }

    pub fn map(&self, f: impl Fn(&FormExpr) -> FormExpr) -> MatrixForm {
        MatrixForm { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&FormExpr) -> Result<FormExpr>) -> Result<MatrixForm> {
        Ok(MatrixForm {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Entrywise sum/difference.
    pub fn zip(&self, o: &MatrixForm, f: impl Fn(&FormExpr, &FormExpr) -> FormExpr) -> Result<MatrixForm> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(MatrixForm {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, o: &MatrixForm) -> Result<MatrixForm> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &MatrixForm) -> Result<MatrixForm> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> MatrixForm {
        self.map(|f| f.scale(s))
    }

    pub fn scale_coeff(&self, c: &Coeff) -> MatrixForm {
        self.map(|f| f.scale_coeff(c))
    }

    pub fn normalize(&self, rel: &RelationSet) -> MatrixForm {
        self.map(|f| f.normalize(rel))
    }

    /// `(M∧N)_ik = Σ_j M_ij ∧ N_jk`.
    pub fn wedge(&self, o: &MatrixForm) -> Result<MatrixForm> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = MatrixForm::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..o.cols {
                let mut acc = FormExpr::zero();
                for j in 0..self.cols {
                    let (a, b) = (self.get(i, j), o.get(j, k));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &a.wedge(b);
                    }
                }
                out.set(i, k, acc);
            }
        }
        Ok(out)
    }

    pub fn d(&self, t: &StructureTable) -> Result<MatrixForm> {
        self.try_map(|f| t.d(f))
    }

    pub fn trace(&self) -> Result<FormExpr> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("trace of {}x{} matrix", self.rows, self.cols)));
        }
        Ok((0..self.rows).fold(FormExpr::zero(), |acc, i| &acc + self.get(i, i)))
    }

    pub fn transpose(&self) -> MatrixForm {
        let mut out = MatrixForm::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Assert every entry is a one-form (or zero).
    pub fn expect_degree(&self, p: usize, what: &str) -> Result<()> {
        for f in &self.entries {
            f.expect_degree(p, what)?;
        }
        Ok(())
    }
}

impl fmt::Display for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn mat_wedge(m: &MatrixForm, n: &MatrixForm) -> Result<MatrixForm> {
    m.wedge(n)
}

pub fn mat_d(m: &MatrixForm, t: &StructureTable) -> Result<MatrixForm> {
    m.d(t)
}

pub fn mat_trace(m: &MatrixForm) -> Result<FormExpr> {
    m.trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Gen;

    #[test]
    fn identity_wedge_zero_is_zero() {
        let z = MatrixForm::zeros(2, 2);
        assert!(MatrixForm::identity(2).wedge(&z).unwrap().is_zero());
    }

    #[test]
    fn dimension_mismatch() {
        let a = MatrixForm::zeros(2, 3);
        assert!(a.wedge(&a).is_err());
        assert!(a.trace().is_err());
        assert!(MatrixForm::from_rows(vec![vec![FormExpr::zero()], vec![]]).is_err());
    }

    #[test]
    fn traceless_sl2_connection() {
        let w = |n: &str| FormExpr::gen(Gen::omega(n));
        let m = MatrixForm::from_rows(vec![vec![w("w1"), w("w2")], vec![w("w3"), -w("w1")]]).unwrap();
        assert!(m.trace().unwrap().is_zero());
    }
}
