use std::fmt;

use super::derive::Derivations;
use super::poly::Scalar;
use crate::error::{Error, Result};

/// Quotient `num / den` of scalars. Not reduced; equality is decided by
/// cross-multiplication. Verification paths avoid fractions entirely, this
/// type exists for presenting results such as `y2 / y1`.
#[derive(Clone, Debug)]
pub struct Fraction {
    num: Scalar,
    den: Scalar,
}

impl Fraction {
    pub fn new(num: Scalar, den: Scalar) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("fraction with zero denominator".into()));
        }
        Ok(Fraction { num, den })
    }

    pub fn from_scalar(s: Scalar) -> Self {
        Fraction { num: s, den: Scalar::one() }
    }

    pub fn numer(&self) -> &Scalar {
        &self.num
    }

    pub fn denom(&self) -> &Scalar {
        &self.den
    }

    pub fn add(&self, o: &Fraction) -> Fraction {
        Fraction { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    pub fn mul(&self, o: &Fraction) -> Fraction {
        Fraction { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    pub fn neg(&self) -> Fraction {
        Fraction { num: -&self.num, den: self.den.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Collapse to a scalar when the denominator is a single term.
    pub fn to_scalar(&self) -> Option<Scalar> {
        self.den.inv_monomial().map(|inv| &self.num * &inv)
    }

    /// Quotient rule.
    pub fn derive(&self, ctx: &Derivations, var: &str) -> Result<Fraction> {
        let dn = ctx.derive(&self.num, var)?;
        let dd = ctx.derive(&self.den, var)?;
        Ok(Fraction { num: &(&dn * &self.den) - &(&self.num * &dd), den: &self.den * &self.den })
    }
}

impl PartialEq for Fraction {
    fn eq(&self, o: &Fraction) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
