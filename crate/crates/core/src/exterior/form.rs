use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{join_terms, Coeff, RelationSet, Scalar, Symbol};

/// Block a generator belongs to. The derived order is the generator order:
/// connection one-forms, then differentials, then Pfaffian forms, then
/// curvature two-forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    Omega,
    Differential,
    Alpha,
    Theta,
}

/// A generator of the exterior algebra.
///
/// `Differential` generators are the exact forms `dv` of indeterminates; their
/// `name` is the indeterminate itself and they render as `d<name>`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub kind: GenKind,
    pub name: Symbol,
}

impl Gen {
    pub fn new(kind: GenKind, name: &str) -> Self {
        Gen { kind, name: Symbol::new(name) }
    }

    pub fn omega(name: &str) -> Self {
        Gen::new(GenKind::Omega, name)
    }

    pub fn theta(name: &str) -> Self {
        Gen::new(GenKind::Theta, name)
    }

    pub fn alpha(name: &str) -> Self {
        Gen::new(GenKind::Alpha, name)
    }

    /// `d<sym>`.
    pub fn diff(sym: &str) -> Self {
        Gen::new(GenKind::Differential, sym)
    }

    pub fn degree(&self) -> usize {
        match self.kind {
            GenKind::Theta => 2,
            _ => 1,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree() % 2 == 1
    }

    pub fn label(&self) -> String {
        match self.kind {
            GenKind::Differential => format!("d{}", self.name),
            _ => self.name.to_string(),
        }
    }
}

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Sort a generator word into canonical order. Returns the sign of the
/// permutation (odd/odd swaps only), or `None` if an odd generator repeats.
pub fn canonical_word(word: &mut [Gen]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            if word[j - 1].is_odd() && word[j].is_odd() {
                sign = -sign;
            }
            word.swap(j - 1, j);
            j -= 1;
        }
    }
    if word.windows(2).any(|w| w[0] == w[1] && w[0].is_odd()) {
        return None;
    }
    Some(sign)
}

/// A differential form: a finite sum of scalar coefficients times canonical
/// generator words. Terms are keyed by word, so the representation is unique.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FormExpr {
    terms: BTreeMap<Vec<Gen>, Scalar>,
}

impl FormExpr {
    pub fn zero() -> Self {
        FormExpr::default()
    }

    pub fn scalar(s: Scalar) -> Self {
        let mut f = FormExpr::zero();
        f.add_term(Vec::new(), s);
        f
    }

    pub fn one() -> Self {
        FormExpr::scalar(Scalar::one())
    }

    pub fn gen(g: Gen) -> Self {
        let mut f = FormExpr::zero();
        f.add_term(vec![g], Scalar::one());
        f
    }

    /// Build from an arbitrary word, reordering with signs.
    pub fn word(coeff: Scalar, mut word: Vec<Gen>) -> Self {
        let mut f = FormExpr::zero();
        if let Some(sign) = canonical_word(&mut word) {
            let c = if sign < 0 { -&coeff } else { coeff };
            f.add_term(word, c);
        }
        f
    }

    fn add_term(&mut self, word: Vec<Gen>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &Scalar)> {
        self.terms.iter()
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Vec<Gen>, Scalar)>) -> Self {
        let mut f = FormExpr::zero();
        for (w, c) in it {
            f = &f + &FormExpr::word(c, w);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(p)` when every term has degree `p`; the zero form is homogeneous
    /// of every degree and reports `None`.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|w| w.iter().map(Gen::degree).sum::<usize>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|w| w.iter().map(Gen::degree).sum::<usize>());
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    /// Error unless the form is zero or homogeneous of degree `p`.
    pub fn expect_degree(&self, p: usize, what: &str) -> Result<()> {
        if self.is_zero() || self.degree() == Some(p) {
            Ok(())
        } else {
            Err(Error::DegreeViolation(format!("{} must be a {}-form, got `{}`", what, p, self)))
        }
    }

    /// The 0-form part.
    pub fn scalar_part(&self) -> Scalar {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.keys().all(|w| w.is_empty()) {
            Some(self.scalar_part())
        } else {
            None
        }
    }

    /// Coefficient of one canonical word.
    pub fn coefficient(&self, word: &[Gen]) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    pub fn gens(&self) -> BTreeSet<Gen> {
        self.terms.keys().flat_map(|w| w.iter().cloned()).collect()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.values().flat_map(|c| c.symbols()).collect()
    }

    pub fn scale(&self, s: &Scalar) -> FormExpr {
        let mut out = FormExpr::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn scale_coeff(&self, c: &Coeff) -> FormExpr {
        self.scale(&Scalar::constant(c.clone()))
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Result<Scalar>) -> Result<FormExpr> {
        let mut out = FormExpr::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Apply scalar relations to every coefficient.
    pub fn normalize(&self, rel: &RelationSet) -> FormExpr {
        self.map_coeffs(|c| Ok(rel.normalize(c))).expect("normalization is total")
    }

    /// The wedge product.
    pub fn wedge(&self, o: &FormExpr) -> FormExpr {
        let mut out = FormExpr::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut word: Vec<Gen> = Vec::with_capacity(w1.len() + w2.len());
                word.extend(w1.iter().cloned());
                word.extend(w2.iter().cloned());
                if let Some(sign) = canonical_word(&mut word) {
                    let c = c1 * c2;
                    out.add_term(word, if sign < 0 { -&c } else { c });
                }
            }
        }
        out
    }

    /// Replace generators by forms and indeterminates by scalars.
    pub fn substitute(
        &self,
        syms: &BTreeMap<Symbol, Scalar>,
        gens: &BTreeMap<Gen, FormExpr>,
    ) -> Result<FormExpr> {
        let mut out = FormExpr::zero();
        for (w, c) in &self.terms {
            let mut acc = FormExpr::scalar(c.substitute(syms)?);
            for g in w {
                let factor = gens.get(g).cloned().unwrap_or_else(|| FormExpr::gen(g.clone()));
                acc = acc.wedge(&factor);
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    pub fn substitute_gens(&self, gens: &BTreeMap<Gen, FormExpr>) -> FormExpr {
        self.substitute(&BTreeMap::new(), gens).expect("generator substitution is total")
    }

    /// Terms whose word contains a generator satisfying `pred`, and the rest.
    pub fn split(&self, pred: impl Fn(&Gen) -> bool) -> (FormExpr, FormExpr) {
        let (mut yes, mut no) = (FormExpr::zero(), FormExpr::zero());
        for (w, c) in &self.terms {
            if w.iter().any(&pred) {
                yes.add_term(w.clone(), c.clone());
            } else {
                no.add_term(w.clone(), c.clone());
            }
        }
        (yes, no)
    }

    pub fn render_with(&self, word: impl Fn(&[Gen]) -> String) -> String {
        let parts = self.terms.iter().flat_map(|(w, c)| {
            let ws = word(w);
            // A multi-term coefficient is printed as a parenthesized factor.
            if c.len() > 1 && !w.is_empty() {
                vec![(false, format!("({})*{}", c, ws))]
            } else {
                c.terms()
                    .map(|(m, k)| {
                        let single = Scalar::term(Coeff::one(), m.clone()).to_string();
                        let factors = match (m.is_one(), w.is_empty()) {
                            (true, true) => String::new(),
                            (true, false) => ws.clone(),
                            (false, true) => single,
                            (false, false) => format!("{}*{}", single, ws),
                        };
                        Scalar::render_term(k, &factors)
                    })
                    .collect()
            }
        });
        join_terms(parts)
    }
}

fn plain_word(w: &[Gen]) -> String {
    w.iter().map(Gen::label).collect::<Vec<_>>().join("^")
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with(plain_word))
    }
}

impl fmt::Debug for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({})", self)
    }
}

impl Add for &FormExpr {
    type Output = FormExpr;
    fn add(self, o: &FormExpr) -> FormExpr {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &FormExpr {
    type Output = FormExpr;
    fn sub(self, o: &FormExpr) -> FormExpr {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &FormExpr {
    type Output = FormExpr;
    fn neg(self) -> FormExpr {
        let mut out = FormExpr::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Add for FormExpr {
    type Output = FormExpr;
    fn add(self, o: FormExpr) -> FormExpr {
        &self + &o
    }
}

impl Sub for FormExpr {
    type Output = FormExpr;
    fn sub(self, o: FormExpr) -> FormExpr {
        &self - &o
    }
}

impl Neg for FormExpr {
    type Output = FormExpr;
    fn neg(self) -> FormExpr {
        -&self
    }
}

impl From<Scalar> for FormExpr {
    fn from(s: Scalar) -> Self {
        FormExpr::scalar(s)
    }
}

impl From<Gen> for FormExpr {
    fn from(g: Gen) -> Self {
        FormExpr::gen(g)
    }
}

/// Wedge product as a free function.
pub fn wedge(u: &FormExpr, v: &FormExpr) -> FormExpr {
    u.wedge(v)
}
