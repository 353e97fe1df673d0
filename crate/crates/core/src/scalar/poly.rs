//! Canonical Laurent polynomials with exponential generators.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::number::{Coeff, Rational};
use super::symbol::Symbol;
use crate::error::{Error, Result};

/// Power product `Π v^k · exp(Σ c·y)`.
///
/// Exponents may be negative (Laurent monomials). Both lists are kept sorted
/// by symbol with zero entries removed, which makes the representation unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pows: Vec<(Symbol, i32)>,
    exps: Vec<(Symbol, Rational)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(s: Symbol, k: i32) -> Self {
        if k == 0 {
            return Monomial::one();
        }
        Monomial { pows: vec![(s, k)], exps: Vec::new() }
    }

    pub fn exp(s: Symbol, c: Rational) -> Self {
        if c.is_zero() {
            return Monomial::one();
        }
        Monomial { pows: Vec::new(), exps: vec![(s, c)] }
    }

    pub fn is_one(&self) -> bool {
        self.pows.is_empty() && self.exps.is_empty()
    }

    pub fn powers(&self) -> &[(Symbol, i32)] {
        &self.pows
    }

    pub fn exponentials(&self) -> &[(Symbol, Rational)] {
        &self.exps
    }

    pub fn power_of(&self, s: &Symbol) -> i32 {
        self.pows.iter().find(|(v, _)| v == s).map(|(_, k)| *k).unwrap_or(0)
    }

    pub fn exp_rate_of(&self, s: &Symbol) -> Rational {
        self.exps
            .iter()
            .find(|(v, _)| v == s)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> i32 {
        self.pows.iter().map(|(_, k)| k).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial { pows: merge(&self.pows, &o.pows), exps: merge(&self.exps, &o.exps) }
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            pows: self.pows.iter().map(|(s, k)| (s.clone(), -k)).collect(),
            exps: self.exps.iter().map(|(s, c)| (s.clone(), -c.clone())).collect(),
        }
    }

    /// `self / o` when every exponent of `o` is covered with nonnegative
    /// remainder; used for relation matching.
    pub fn divide(&self, o: &Monomial) -> Option<Monomial> {
        if !o.exps.is_empty() {
            return None;
        }
        for (s, k) in &o.pows {
            let have = self.power_of(s);
            if *k > 0 && have < *k {
                return None;
            }
            if *k <= 0 {
                return None;
            }
        }
        Some(self.mul(&o.inv()))
    }

    /// Remove `s` entirely, returning its power.
    pub fn without(&self, s: &Symbol) -> (Monomial, i32, Rational) {
        let k = self.power_of(s);
        let c = self.exp_rate_of(s);
        let m = Monomial {
            pows: self.pows.iter().filter(|(v, _)| v != s).cloned().collect(),
            exps: self.exps.iter().filter(|(v, _)| v != s).cloned().collect(),
        };
        (m, k, c)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.pows.iter().map(|(s, _)| s).chain(self.exps.iter().map(|(s, _)| s))
    }

    fn render(&self) -> String {
        let mut parts: Vec<String> = self
            .pows
            .iter()
            .map(|(s, k)| if *k == 1 { s.to_string() } else { format!("{}^{}", s, k) })
            .collect();
        if !self.exps.is_empty() {
            let mut arg = String::new();
            for (j, (s, c)) in self.exps.iter().enumerate() {
                let neg = c.is_negative();
                let mag = c.abs();
                if j == 0 {
                    if neg {
                        arg.push('-');
                    }
                } else {
                    arg.push_str(if neg { " - " } else { " + " });
                }
                if mag.is_one() {
                    arg.push_str(s.name());
                } else {
                    arg.push_str(&format!("{}*{}", mag, s));
                }
            }
            parts.push(format!("exp({})", arg));
        }
        parts.join("*")
    }
}

fn merge<V>(a: &[(Symbol, V)], b: &[(Symbol, V)]) -> Vec<(Symbol, V)>
where
    V: Clone + Zero + for<'x> Add<&'x V, Output = V>,
{
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let v = a[i].1.clone() + &b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded: total degree first, then lexicographic on (name, power), then
    /// the exponential part.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.pows.cmp(&other.pows))
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

/// Element of the coefficient ring: a finite sum `Σ c·m` in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Scalar::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::constant(Coeff::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::constant(Coeff::from_ratio(n, d))
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Scalar { terms }
    }

    pub fn var(name: &str) -> Self {
        Scalar::symbol(Symbol::new(name))
    }

    pub fn symbol(s: Symbol) -> Self {
        Scalar::term(Coeff::one(), Monomial::var(s, 1))
    }

    /// The exponential generator `exp(rate·s)`.
    pub fn exp(s: Symbol, rate: Rational) -> Self {
        Scalar::term(Coeff::one(), Monomial::exp(s, rate))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut s = Scalar::zero();
        for (m, c) in it {
            s.add_term(m, c);
        }
        s
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn scale(&self, c: &Coeff) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Inverse of a single-term scalar.
    pub fn inv_monomial(&self) -> Option<Scalar> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Some(Scalar::term(c.inv()?, m.inv()))
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.symbols().cloned()).collect()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.terms.keys().any(|m| m.symbols().any(|v| v == s))
    }

    /// Partial derivative with respect to one indeterminate, treating all
    /// others (including derivative tags) as independent.
    pub fn partial(&self, s: &Symbol) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let k = m.power_of(s);
            if k != 0 {
                let lowered = m.mul(&Monomial::var(s.clone(), -1));
                out.add_term(lowered, c * &Coeff::from_int(k as i64));
            }
            let rate = m.exp_rate_of(s);
            if !rate.is_zero() {
                out.add_term(m.clone(), c * &Coeff::from_rational(rate));
            }
        }
        out
    }

    /// Highest total degree in the given indeterminates over all terms.
    pub fn degree_in(&self, vars: &BTreeSet<Symbol>) -> i32 {
        self.terms
            .keys()
            .map(|m| m.powers().iter().filter(|(s, _)| vars.contains(s)).map(|(_, k)| *k).sum())
            .max()
            .unwrap_or(0)
    }

    /// Lowest power of `s` across the terms (0 when absent from some term).
    pub fn min_power(&self, s: &Symbol) -> i32 {
        self.terms.keys().map(|m| m.power_of(s)).min().unwrap_or(0)
    }

    /// Replace indeterminates by scalars. Negative powers need a single-term
    /// replacement; an indeterminate inside `exp(..)` may only be replaced by a
    /// rational multiple of another indeterminate.
    pub fn substitute(&self, map: &BTreeMap<Symbol, Scalar>) -> Result<Scalar> {
        if map.is_empty() || !self.symbols().iter().any(|s| map.contains_key(s)) {
            return Ok(self.clone());
        }
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut acc = Scalar::constant(c.clone());
            let mut rest = Monomial::one();
            for (s, k) in m.powers() {
                match map.get(s) {
                    Some(r) => {
                        let f = if *k >= 0 {
                            r.pow(*k as u32)
                        } else {
                            r.inv_monomial()
                                .ok_or_else(|| {
                                    Error::Substitution(format!(
                                        "negative power of `{}` needs a single-term replacement",
                                        s
                                    ))
                                })?
                                .pow((-k) as u32)
                        };
                        acc = &acc * &f;
                    }
                    None => rest = rest.mul(&Monomial::var(s.clone(), *k)),
                }
            }
            for (s, rate) in m.exponentials() {
                match map.get(s) {
                    Some(r) => {
                        let (q, v) = r.as_scaled_symbol().ok_or_else(|| {
                            Error::Substitution(format!(
                                "exponential in `{}` needs a rational multiple of a symbol",
                                s
                            ))
                        })?;
                        rest = rest.mul(&Monomial::exp(v, rate * q));
                    }
                    None => rest = rest.mul(&Monomial::exp(s.clone(), rate.clone())),
                }
            }
            out = &out + &acc.mul_monomial(&rest);
        }
        Ok(out)
    }

    /// `Some((q, v))` when the scalar is exactly `q·v`.
    pub fn as_scaled_symbol(&self) -> Option<(Rational, Symbol)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let q = c.as_rational()?.clone();
        match (m.powers(), m.exponentials()) {
            ([(s, 1)], []) => Some((q, s.clone())),
            _ => None,
        }
    }

    /// Exact division by `v^k`; fails if some term has a lower power of `v`
    /// than required to stay polynomial in `v`.
    pub fn div_power_exact(&self, v: &Symbol, k: i32) -> Option<Scalar> {
        if self.terms.keys().any(|m| m.power_of(v) < k) {
            return None;
        }
        Some(self.mul_monomial(&Monomial::var(v.clone(), -k)))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> Scalar {
        Scalar::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Evaluate numerically with real values for the symbols. Complex or
    /// missing entries yield `None`.
    pub fn eval_f64(&self, env: &dyn Fn(&Symbol) -> Option<f64>) -> Option<f64> {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            if !c.im.is_zero() {
                return None;
            }
            let mut v = c.re.to_f64();
            for (s, k) in m.powers() {
                v *= env(s)?.powi(*k);
            }
            for (s, r) in m.exponentials() {
                v *= (super::number::ratio_to_f64(r) * env(s)?).exp();
            }
            total += v;
        }
        Some(total)
    }

    /// `(negative, body)` rendering of one term for sum printing.
    pub(crate) fn render_term(c: &Coeff, factors: &str) -> (bool, String) {
        let neg = c.is_atomic() && c.leading_negative();
        let mag = if neg { -c } else { c.clone() };
        let body = if factors.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            factors.to_string()
        } else {
            format!("{}*{}", mag, factors)
        };
        (neg, body)
    }
}

pub(crate) fn join_terms(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (k, (neg, body)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (0, false) => out.push_str(&body),
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.terms.iter().map(|(m, c)| Scalar::render_term(c, &m.render()));
        write!(f, "{}", join_terms(parts))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar { (&self).$f(&o) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: &Scalar) -> Scalar { (&self).$f(o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<Coeff> for Scalar {
    fn from(c: Coeff) -> Self {
        Scalar::constant(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::number::int;

    fn v(n: &str) -> Scalar {
        Scalar::var(n)
    }

    #[test]
    fn commutativity_cancels() {
        assert!((&v("y1") * &v("y2") - &v("y2") * &v("y1")).is_zero());
    }

    #[test]
    fn exponentials_merge_and_cancel() {
        let e1 = Scalar::exp(Symbol::new("y5"), int(-2));
        let e2 = Scalar::exp(Symbol::new("y5"), int(2));
        assert!((&e1 * &e2).is_one());
        assert_eq!((&e1 * &e1).to_string(), "exp(-4*y5)");
    }

    #[test]
    fn laurent_cancellation() {
        let a = v("a1");
        let ainv = a.inv_monomial().unwrap();
        assert!((&a * &ainv).is_one());
        assert_eq!(ainv.to_string(), "a1^-1");
    }

    #[test]
    fn partial_derivatives() {
        let s = &(&v("y3") * &v("y3")) * &Scalar::exp(Symbol::new("y3"), int(-2));
        // ∂/∂y3 (y3² e^{-2y3}) = 2 y3 e^{-2y3} − 2 y3² e^{-2y3}
        let expect = &(&Scalar::int(2) * &v("y3")) - &(&Scalar::int(2) * &(&v("y3") * &v("y3")));
        let expect = &expect * &Scalar::exp(Symbol::new("y3"), int(-2));
        assert_eq!(s.partial(&Symbol::new("y3")), expect);
    }

    #[test]
    fn rendering_is_graded() {
        let s = &(&v("y4") * &v("y4")) + &Scalar::one();
        assert_eq!(s.to_string(), "1 + y4^2");
        let t = &Scalar::int(-3) * &v("y5");
        assert_eq!(t.to_string(), "-3*y5");
    }

    #[test]
    fn substitution_of_ratio() {
        let mut map = BTreeMap::new();
        map.insert(Symbol::new("y2"), &v("y3") * &v("y1"));
        let s = (&v("y2") * &v("y2")).substitute(&map).unwrap();
        assert_eq!(s, &(&v("y3") * &v("y3")) * &(&v("y1") * &v("y1")));
    }
}
