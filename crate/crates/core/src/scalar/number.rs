//! Exact constants: the field Q(i, √3).
//!
//! [`Surd`] is `a + b·√3` over the rationals and [`Coeff`] adjoins the
//! imaginary unit on top of it. Every constant that appears in the SU(3)
//! connection (`1/√3`, `2/√3`, `√3·i`) lives here without rounding.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `rational + sqrt3 · √3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surd {
    pub rational: Rational,
    pub sqrt3: Rational,
}

impl Surd {
    pub fn new(rational: Rational, sqrt3: Rational) -> Self {
        Surd { rational, sqrt3 }
    }

    pub fn zero() -> Self {
        Surd::new(Rational::zero(), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        Surd::new(r, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.sqrt3.is_zero()
    }

    /// Multiplicative inverse; `None` for zero. `a² − 3b²` never vanishes for
    /// a nonzero surd because √3 is irrational.
    pub fn inv(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.rational * &self.rational - int(3) * &self.sqrt3 * &self.sqrt3;
        Some(Surd::new(&self.rational / &norm, -&self.sqrt3 / &norm))
    }

    /// Real value, for numeric consumers only.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.rational) + ratio_to_f64(&self.sqrt3) * 3f64.sqrt()
    }
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        Surd::new(&self.rational + &o.rational, &self.sqrt3 + &o.sqrt3)
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        Surd::new(&self.rational - &o.rational, &self.sqrt3 - &o.sqrt3)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        Surd::new(
            &self.rational * &o.rational + int(3) * &self.sqrt3 * &o.sqrt3,
            &self.rational * &o.sqrt3 + &self.sqrt3 * &o.rational,
        )
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-&self.rational, -&self.sqrt3)
    }
}

/// An element of Q(i, √3), stored as `re + i·im` with surd parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coeff {
    pub re: Surd,
    pub im: Surd,
}

impl Coeff {
    pub fn new(re: Surd, im: Surd) -> Self {
        Coeff { re, im }
    }

    pub fn zero() -> Self {
        Coeff::new(Surd::zero(), Surd::zero())
    }

    pub fn one() -> Self {
        Coeff::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::from_rational(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Coeff::from_rational(rat(n, d))
    }

    pub fn from_rational(r: Rational) -> Self {
        Coeff::new(Surd::from_rational(r), Surd::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Coeff::new(Surd::zero(), Surd::from_rational(Rational::one()))
    }

    pub fn sqrt3() -> Self {
        Coeff::new(Surd::new(Rational::zero(), Rational::one()), Surd::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.sqrt3.is_zero() && self.re.rational.is_one()
    }

    /// `Some(q)` when the value is a plain rational.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.im.is_zero() && self.re.sqrt3.is_zero() {
            Some(&self.re.rational)
        } else {
            None
        }
    }

    pub fn conj(&self) -> Coeff {
        Coeff::new(self.re.clone(), -&self.im)
    }

    pub fn inv(&self) -> Option<Coeff> {
        // (re + i im)⁻¹ = (re − i im) / (re² + im²), and re² + im² ≠ 0 in the real field Q(√3).
        let norm = &(&self.re * &self.re) + &(&self.im * &self.im);
        let ninv = norm.inv()?;
        Some(Coeff::new(&self.re * &ninv, -&(&self.im * &ninv)))
    }

    pub fn pow(&self, mut e: u32) -> Coeff {
        let mut base = self.clone();
        let mut acc = Coeff::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Parts as `(rational, i, √3, i√3)` coefficients.
    fn parts(&self) -> [(&Rational, &'static str); 4] {
        [
            (&self.re.rational, ""),
            (&self.im.rational, "i"),
            (&self.re.sqrt3, "sqrt3"),
            (&self.im.sqrt3, "i*sqrt3"),
        ]
    }

    fn nonzero_parts(&self) -> usize {
        self.parts().iter().filter(|(q, _)| !q.is_zero()).count()
    }

    /// True when rendering needs no parentheses as a product factor.
    pub fn is_atomic(&self) -> bool {
        self.nonzero_parts() <= 1
    }

    /// Sign of the leading part, used to pull a minus sign out in rendering.
    pub fn leading_negative(&self) -> bool {
        self.parts()
            .iter()
            .find(|(q, _)| !q.is_zero())
            .map(|(q, _)| q.is_negative())
            .unwrap_or(false)
    }
}

fn write_part(f: &mut fmt::Formatter<'_>, q: &Rational, unit: &str) -> fmt::Result {
    if unit.is_empty() {
        return write!(f, "{}", q);
    }
    if q.is_one() {
        write!(f, "{}", unit)
    } else if (-q).is_one() {
        write!(f, "-{}", unit)
    } else {
        write!(f, "{}*{}", q, unit)
    }
}

impl fmt::Display for Coeff {
    /// Reparsable rendering: `3`, `-1/2`, `i`, `1/3*sqrt3`, `(1 - 2*i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.parts().into_iter().filter(|(q, _)| !q.is_zero()).collect();
        match parts.len() {
            0 => write!(f, "0"),
            1 => write_part(f, parts[0].0, parts[0].1),
            _ => {
                write!(f, "(")?;
                for (k, (q, unit)) in parts.iter().enumerate() {
                    if k == 0 {
                        write_part(f, q, unit)?;
                    } else if q.is_negative() {
                        write!(f, " - ")?;
                        write_part(f, &-(*q).clone(), unit)?;
                    } else {
                        write!(f, " + ")?;
                        write_part(f, q, unit)?;
                    }
                }
                write!(f, ")")
            }
        }
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        Coeff::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, o: &Coeff) {
        *self = &*self + o;
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        Coeff::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        Coeff::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }
}

impl Div for &Coeff {
    type Output = Option<Coeff>;
    fn div(self, o: &Coeff) -> Option<Coeff> {
        o.inv().map(|inv| self * &inv)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(-&self.re, -&self.im)
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_int(n)
    }
}

impl From<Rational> for Coeff {
    fn from(r: Rational) -> Self {
        Coeff::from_rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        assert_eq!(&Coeff::i() * &Coeff::i(), Coeff::from_int(-1));
    }

    #[test]
    fn sqrt3_squares_to_three() {
        assert_eq!(&Coeff::sqrt3() * &Coeff::sqrt3(), Coeff::from_int(3));
    }

    #[test]
    fn inverse_of_mixed_element() {
        let z = &(&Coeff::from_int(2) + &Coeff::i()) + &(&Coeff::sqrt3() * &Coeff::i());
        let inv = z.inv().unwrap();
        assert!((&z * &inv).is_one());
        assert!(Coeff::zero().inv().is_none());
    }

    #[test]
    fn rendering() {
        assert_eq!(Coeff::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!((-Coeff::i()).to_string(), "-i");
        let third = &Coeff::sqrt3() * &Coeff::from_ratio(1, 3);
        assert_eq!(third.to_string(), "1/3*sqrt3");
        let z = &Coeff::one() - &(&Coeff::from_int(2) * &Coeff::i());
        assert_eq!(z.to_string(), "(1 - 2*i)");
    }
}
