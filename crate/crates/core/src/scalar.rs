//! Exact scalars: big rationals and rational functions in the single
//! parameter `λ` (written `L` in ASCII).
//!
//! Every higher-level structure is generic over [`Scalar`], so the same
//! code runs with numeric coefficients or with `λ` kept symbolic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::UniPoly;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A commutative field with exact, structural zero test.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&int(v))
    }

    fn checked_div(&self, other: &Self) -> Result<Self>;

    fn inv(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// `Some` when the value does not depend on the parameter.
    fn to_rational(&self) -> Option<Rational>;

    /// True when the rendering is a signed product (no inner `+`/`-`), so it
    /// can be written as a coefficient without parentheses.
    fn is_monomial_like(&self) -> bool {
        true
    }

    /// Splits the value into a sign and a magnitude suitable for writing a
    /// term of a sum; compound values come back parenthesized and positive.
    fn signed_parts(&self) -> (bool, String) {
        let s = self.to_string();
        if !self.is_monomial_like() {
            return (false, format!("({s})"));
        }
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / other)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Element of `Q(λ)`: a reduced fraction of polynomials in `λ` with monic
/// denominator.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct ParamScalar {
    num: UniPoly<Rational>,
    den: UniPoly<Rational>,
}

impl ParamScalar {
    pub fn new(num: UniPoly<Rational>, den: UniPoly<Rational>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: UniPoly<Rational>, den: UniPoly<Rational>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g).expect("gcd is nonzero");
        let (mut den, _) = den.div_rem(&g).expect("gcd is nonzero");
        let lead = den.leading().expect("denominator is nonzero");
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ParamScalar { num, den }
    }

    /// The parameter `λ` itself.
    pub fn lambda() -> Self {
        ParamScalar { num: UniPoly::x(), den: UniPoly::one() }
    }

    pub fn constant(r: Rational) -> Self {
        ParamScalar { num: UniPoly::constant(r), den: UniPoly::one() }
    }

    pub fn numerator(&self) -> &UniPoly<Rational> {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly<Rational> {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    /// Substitutes `λ := t`.
    pub fn eval_at(&self, t: &Rational) -> Result<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::PoleAtParameter(t.to_string()));
        }
        Ok(self.num.eval(t) / d)
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        let p = Scalar::pow(self, e.unsigned_abs());
        if e < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }
}

impl Zero for ParamScalar {
    fn zero() -> Self {
        ParamScalar { num: UniPoly::zero(), den: UniPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for ParamScalar {
    fn one() -> Self {
        ParamScalar { num: UniPoly::one(), den: UniPoly::one() }
    }
}

impl Add for ParamScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            return Self::normalized(self.num + o.num, self.den);
        }
        Self::normalized(self.num * o.den.clone() + o.num * self.den.clone(), self.den * o.den)
    }
}

impl Sub for ParamScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for ParamScalar {
    type Output = Self;
    fn neg(self) -> Self {
        ParamScalar { num: -self.num, den: self.den }
    }
}

impl Mul for ParamScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::normalized(self.num * o.num, self.den * o.den)
    }
}

impl Scalar for ParamScalar {
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }

    fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.num.clone() * other.den.clone(), self.den.clone() * other.num.clone()))
    }

    fn to_rational(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    fn is_monomial_like(&self) -> bool {
        self.num.term_count() <= 1
    }
}

fn render_lambda_poly(p: &UniPoly<Rational>, wrap_sum: bool) -> String {
    let s = p.render("L");
    if wrap_sum && p.term_count() > 1 {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", render_lambda_poly(&self.num, false));
        }
        let num = render_lambda_poly(&self.num, true);
        let den = render_lambda_poly(&self.den, true);
        write!(f, "{num}/{den}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam_pow(e: i32) -> ParamScalar {
        ParamScalar::lambda().powi(e).unwrap()
    }

    #[test]
    fn rational_addition() {
        assert_eq!(rat(1, 2) + rat(1, 3), rat(5, 6));
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        assert!((lam_pow(4) * lam_pow(-4)).is_one());
    }

    #[test]
    fn division_by_lambda_power_normalizes() {
        let c = ParamScalar::constant(int(256));
        let q = c.checked_div(&lam_pow(4)).unwrap();
        assert_eq!(q.to_string(), "256/L^4");
        assert!(q.denominator().leading().unwrap().is_one());
        assert_eq!(q.eval_at(&int(2)).unwrap(), int(16));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let z = ParamScalar::zero();
        assert_eq!(ParamScalar::one().checked_div(&z), Err(Error::DivisionByZero));
        assert_eq!(int(1).checked_div(&int(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn evaluation() {
        assert_eq!(ParamScalar::lambda().eval_at(&int(1)).unwrap(), int(1));
        let inv = lam_pow(-1);
        assert!(matches!(inv.eval_at(&int(0)), Err(Error::PoleAtParameter(_))));
    }

    #[test]
    fn zero_tests() {
        assert!(ParamScalar::zero().is_zero());
        let l = ParamScalar::lambda();
        assert!((l.clone() - l).is_zero());
        // (4 - nu)/24 vanishes exactly at nu = 4
        let nu = ParamScalar::lambda();
        let expr = (ParamScalar::from_i64(4) - nu).checked_div(&ParamScalar::from_i64(24)).unwrap();
        assert!(expr.eval_at(&int(4)).unwrap().is_zero());
        assert!(!expr.eval_at(&int(3)).unwrap().is_zero());
        assert!(!expr.is_zero());
    }

    #[test]
    fn zero_is_unique() {
        let l = ParamScalar::lambda();
        let z = (l.clone() * l.clone()).checked_div(&(l.clone() + ParamScalar::one())).unwrap()
            - (l.clone() * l.clone()).checked_div(&(l + ParamScalar::one())).unwrap();
        assert_eq!(z, ParamScalar::zero());
    }
}
