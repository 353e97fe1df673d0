use std::collections::BTreeMap;

use super::form::{FormExpr, Gen, GenKind};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Symbol};

/// Exterior derivatives of generators and differentials of indeterminates.
///
/// `Differential` generators are exact and need no entry. Everything else that
/// `d` meets must be registered, possibly with the zero form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureTable {
    gens: BTreeMap<Gen, FormExpr>,
    syms: BTreeMap<Symbol, FormExpr>,
}

impl StructureTable {
    pub fn new() -> Self {
        StructureTable::default()
    }

    pub fn set_gen(&mut self, g: Gen, dg: FormExpr) {
        self.gens.insert(g, dg);
    }

    pub fn set_symbol(&mut self, s: Symbol, ds: FormExpr) {
        self.syms.insert(s, ds);
    }

    /// Register `s` with differential `ds` where `ds` is the generator `d<s>`.
    pub fn add_coordinate(&mut self, name: &str) {
        self.syms.insert(Symbol::new(name), FormExpr::gen(Gen::diff(name)));
    }

    /// Register `s` as a constant (`ds = 0`).
    pub fn add_constant(&mut self, name: &str) {
        self.syms.insert(Symbol::new(name), FormExpr::zero());
    }

    pub fn with_coordinates<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        for n in names {
            self.add_coordinate(n);
        }
        self
    }

    pub fn gen_entry(&self, g: &Gen) -> Option<&FormExpr> {
        self.gens.get(g)
    }

    pub fn symbol_entry(&self, s: &Symbol) -> Option<&FormExpr> {
        self.syms.get(s)
    }

    pub fn gen_entries(&self) -> impl Iterator<Item = (&Gen, &FormExpr)> {
        self.gens.iter()
    }

    pub fn symbol_entries(&self) -> impl Iterator<Item = (&Symbol, &FormExpr)> {
        self.syms.iter()
    }

    pub fn d_gen(&self, g: &Gen) -> Result<FormExpr> {
        if g.kind == GenKind::Differential {
            return Ok(FormExpr::zero());
        }
        self.gens.get(g).cloned().ok_or_else(|| Error::MissingTableEntry(g.label()))
    }

    /// `ds = Σ ∂s/∂v · dv`.
    pub fn d_scalar(&self, s: &Scalar) -> Result<FormExpr> {
        let mut out = FormExpr::zero();
        for v in s.symbols() {
            let dv = self.syms.get(&v).ok_or_else(|| Error::MissingTableEntry(v.to_string()))?;
            if dv.is_zero() {
                continue;
            }
            out = &out + &dv.scale(&s.partial(&v));
        }
        Ok(out)
    }

    /// Exterior derivative: linear, graded Leibniz, and equal to the table on
    /// generators.
    pub fn d(&self, u: &FormExpr) -> Result<FormExpr> {
        let mut out = FormExpr::zero();
        for (word, c) in u.terms() {
            let mono = FormExpr::word(Scalar::one(), word.clone());
            out = &out + &self.d_scalar(c)?.wedge(&mono);
            let mut sign = 1;
            for (i, g) in word.iter().enumerate() {
                let dg = self.d_gen(g)?;
                if !dg.is_zero() {
                    let before = FormExpr::word(c.clone(), word[..i].to_vec());
                    let after = FormExpr::word(Scalar::one(), word[i + 1..].to_vec());
                    let piece = before.wedge(&dg).wedge(&after);
                    out = if sign > 0 { &out + &piece } else { &out - &piece };
                }
                if g.is_odd() {
                    sign = -sign;
                }
            }
        }
        Ok(out)
    }

    /// Merge another table into this one; later entries win.
    pub fn extend(&mut self, other: &StructureTable) {
        for (g, f) in &other.gens {
            self.gens.insert(g.clone(), f.clone());
        }
        for (s, f) in &other.syms {
            self.syms.insert(s.clone(), f.clone());
        }
    }

    /// Check `d(d(x)) = 0` for every generator and indeterminate entry.
    /// Returns the offending labels.
    pub fn d_squared_failures(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for (g, dg) in &self.gens {
            if !self.d(dg)?.is_zero() {
                bad.push(g.label());
            }
        }
        for (s, ds) in &self.syms {
            if !self.d(ds)?.is_zero() {
                bad.push(format!("d{}", s));
            }
        }
        Ok(bad)
    }
}

/// The exterior derivative as a free function.
pub fn d(u: &FormExpr, t: &StructureTable) -> Result<FormExpr> {
    t.d(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: &str) -> FormExpr {
        FormExpr::gen(Gen::omega(n))
    }

    fn th(n: &str) -> FormExpr {
        FormExpr::gen(Gen::theta(n))
    }

    /// dω1 = ϑ1 + ω2∧ω3, dω2 = ϑ2 + 2ω1∧ω2, dω3 = ϑ3 − 2ω1∧ω3, hand-entered.
    fn sl2_table() -> StructureTable {
        let mut t = StructureTable::new().with_coordinates(["y1", "y2", "y3"]);
        t.set_gen(Gen::omega("w1"), &th("th1") + &w("w2").wedge(&w("w3")));
        t.set_gen(Gen::omega("w2"), &th("th2") + &w("w1").wedge(&w("w2")).scale(&Scalar::int(2)));
        t.set_gen(Gen::omega("w3"), &th("th3") - &w("w1").wedge(&w("w3")).scale(&Scalar::int(2)));
        t
    }

    #[test]
    fn d_on_generator_matches_table() {
        let t = sl2_table();
        assert_eq!(t.d(&w("w1")).unwrap(), &th("th1") + &w("w2").wedge(&w("w3")));
    }

    #[test]
    fn d_of_exact_generator() {
        let t = sl2_table();
        assert!(t.d(&FormExpr::gen(Gen::diff("y1"))).unwrap().is_zero());
    }

    #[test]
    fn leibniz_by_hand() {
        // d(y3 ω2) = dy3∧ω2 + y3(ϑ2 + 2ω1∧ω2)
        let t = sl2_table();
        let u = w("w2").scale(&Scalar::var("y3"));
        let expect = &FormExpr::gen(Gen::diff("y3")).wedge(&w("w2"))
            + &(&th("th2") + &w("w1").wedge(&w("w2")).scale(&Scalar::int(2))).scale(&Scalar::var("y3"));
        assert_eq!(t.d(&u).unwrap(), expect);
    }

    #[test]
    fn missing_entry_names_symbol() {
        let t = sl2_table();
        let u = w("w1").scale(&Scalar::var("q"));
        assert_eq!(t.d(&u), Err(Error::MissingTableEntry("q".into())));
        assert_eq!(t.d(&w("w9")), Err(Error::MissingTableEntry("w9".into())));
    }
}
