use std::collections::BTreeSet;

use super::poly::Scalar;
use super::symbol::Symbol;
use crate::error::{Error, Result};

/// Formal derivations acting on the coefficient ring.
///
/// Each derivation is named by one letter (`x`, `t`). The letter itself is the
/// independent variable (`∂x x = 1`, `∂t x = 0`), registered constants such as
/// the spectral parameter differentiate to zero, and every other indeterminate
/// `v` maps to its tagged derivative `v,x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivations {
    vars: Vec<char>,
    constants: BTreeSet<Symbol>,
}

impl Default for Derivations {
    fn default() -> Self {
        Derivations::new(&['x', 't'])
    }
}

impl Derivations {
    pub fn new(vars: &[char]) -> Self {
        Derivations { vars: vars.to_vec(), constants: BTreeSet::new() }
    }

    pub fn with_constant(mut self, name: &str) -> Self {
        self.constants.insert(Symbol::new(name));
        self
    }

    pub fn with_constants<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        for n in names {
            self.constants.insert(Symbol::new(n));
        }
        self
    }

    pub fn is_constant(&self, s: &Symbol) -> bool {
        self.constants.contains(s)
            || (s.derivative_order() > 0 && self.constants.contains(&Symbol::new(s.base())))
    }

    fn resolve(&self, name: &str) -> Result<char> {
        let mut chars = name.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if self.vars.contains(&c) => Ok(c),
            _ => Err(Error::UnknownDerivation(name.to_string())),
        }
    }

    /// Image of one indeterminate.
    pub fn of_symbol(&self, s: &Symbol, var: char) -> Scalar {
        if self.is_constant(s) {
            return Scalar::zero();
        }
        if self.vars.iter().any(|&c| s.name().len() == 1 && s.name().starts_with(c)) {
            return if s.name().starts_with(var) { Scalar::one() } else { Scalar::zero() };
        }
        Scalar::symbol(s.tagged(var))
    }

    /// Apply the derivation named `name`; linear and Leibniz by construction
    /// (chain rule through every indeterminate).
    pub fn derive(&self, s: &Scalar, name: &str) -> Result<Scalar> {
        let var = self.resolve(name)?;
        let mut out = Scalar::zero();
        for sym in s.symbols() {
            let d = self.of_symbol(&sym, var);
            if d.is_zero() {
                continue;
            }
            out = &out + &(&s.partial(&sym) * &d);
        }
        Ok(out)
    }
}

/// Apply derivation `v` (`"x"` or `"t"`) with no registered constants except
/// `eta`, the spectral parameter.
pub fn derive_scalar(s: &Scalar, v: &str) -> Result<Scalar> {
    Derivations::default().with_constant("eta").derive(s, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::number::int;

    #[test]
    fn leibniz_on_coefficients() {
        let s = &Scalar::var("a1") * &Scalar::var("a2");
        let d = derive_scalar(&s, "x").unwrap();
        let expect = &(&Scalar::var("a1,x") * &Scalar::var("a2")) + &(&Scalar::var("a1") * &Scalar::var("a2,x"));
        assert_eq!(d, expect);
    }

    #[test]
    fn spectral_parameter_is_constant() {
        assert!(derive_scalar(&Scalar::var("eta"), "x").unwrap().is_zero());
    }

    #[test]
    fn exponential_chain_rule() {
        let e = Scalar::exp(Symbol::new("y5"), int(-2));
        let d = derive_scalar(&e, "x").unwrap();
        let expect = &(&Scalar::int(-2) * &e) * &Scalar::var("y5,x");
        assert_eq!(d, expect);
    }

    #[test]
    fn unknown_derivation() {
        assert_eq!(
            derive_scalar(&Scalar::var("a1"), "z"),
            Err(Error::UnknownDerivation("z".into()))
        );
    }

    #[test]
    fn independent_variables() {
        let s = &Scalar::var("x") * &Scalar::var("t");
        assert_eq!(derive_scalar(&s, "x").unwrap(), Scalar::var("t"));
        assert_eq!(derive_scalar(&s, "t").unwrap(), Scalar::var("x"));
    }
}
