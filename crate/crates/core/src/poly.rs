//! Dense univariate polynomials over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Coefficients of `x^0 .. x^p`, trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct UniPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniPoly<S> {
    pub fn from_coeffs(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![S::zero(), S::one()])
    }

    pub fn monomial(c: S, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    /// `x + shift`.
    pub fn linear(shift: S) -> Self {
        Self::from_coeffs(vec![shift, S::one()])
    }

    /// `prod (x + shift_i)`.
    pub fn from_shifts<'a>(shifts: impl IntoIterator<Item = &'a S>) -> Self {
        shifts.into_iter().fold(Self::one(), |acc, c| acc * Self::linear(c.clone()))
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        Ok(self.scale(&lead.inv()?))
    }

    pub fn eval(&self, t: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    /// `p(x + t)`.
    pub fn shift(&self, t: &S) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc * Self::linear(t.clone()) + Self::constant(c.clone()))
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.leading().expect("nonzero").inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![S::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("a is nonzero")
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        match other.div_rem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => other.is_zero(),
        }
    }

    /// Coefficient form, highest degree first, e.g. `x^3+3*x^2+3*x+1`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = c.signed_parts();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let var_part = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&var_part);
            } else {
                out.push_str(&format!("{mag}*{var_part}"));
            }
        }
        out
    }
}

impl<S: Scalar> Add for UniPoly<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<S: Scalar> Sub for UniPoly<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<S: Scalar> Neg for UniPoly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        UniPoly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<S: Scalar> Mul for UniPoly<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(out)
    }
}

impl<S: Scalar> fmt::Display for UniPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;

fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

impl UniPoly<Rational> {
    /// All rational roots with multiplicity, plus the cofactor without
    /// rational roots. `None` when the coefficients are too large to search.
    pub fn rational_roots(&self) -> Option<(Vec<(Rational, usize)>, UniPoly<Rational>)> {
        if self.is_zero() {
            return None;
        }
        let mut rest = self.clone();
        let mut roots: Vec<(Rational, usize)> = Vec::new();
        let push = |r: Rational, roots: &mut Vec<(Rational, usize)>| match roots.iter_mut().find(|(x, _)| *x == r) {
            Some(e) => e.1 += 1,
            None => roots.push((r, 1)),
        };
        while rest.degree().unwrap_or(0) > 0 && rest.coeff(0).is_zero() {
            push(Rational::zero(), &mut roots);
            rest = rest.div_rem(&UniPoly::x()).ok()?.0;
        }
        loop {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let denom_lcm = rest.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = rest.coeffs.iter().map(|c| (c * Rational::from_integer(denom_lcm.clone())).to_integer()).collect();
            let p_divs = positive_divisors(&ints[0])?;
            let q_divs = positive_divisors(ints.last().expect("nonzero"))?;
            let mut found = None;
            'search: for q in &q_divs {
                for p in &p_divs {
                    for sign in [1, -1] {
                        let cand = Rational::new(p * BigInt::from(sign), q.clone());
                        if rest.eval(&cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    rest = rest.div_rem(&UniPoly::linear(-r.clone())).ok()?.0;
                    push(r, &mut roots);
                }
                None => break,
            }
        }
        Some((roots, rest))
    }

    /// Factored rendering over `Q` when every root is rational, e.g.
    /// `x(x+1/4)(x+1/2)(x+3/4)` or `(x+1)^3`; coefficient form otherwise.
    /// Factors are ordered by increasing shift.
    pub fn render_factored(&self) -> String {
        let fallback = || self.render("x");
        let Some((mut roots, rest)) = self.rational_roots() else {
            return fallback();
        };
        if rest.degree() != Some(0) || self.degree() == Some(0) {
            return fallback();
        }
        roots.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out = String::new();
        let lead = rest.coeff(0);
        if !lead.is_one() {
            if lead == -Rational::one() {
                out.push('-');
            } else {
                out.push_str(&format!("{lead}*"));
            }
        }
        for (r, mult) in roots {
            let factor = if r.is_zero() {
                "x".to_string()
            } else if r.is_negative() {
                format!("(x+{})", -r)
            } else {
                format!("(x-{r})")
            };
            out.push_str(&factor);
            if mult > 1 {
                out.push_str(&format!("^{mult}"));
            }
        }
        match out.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            Some(inner) if !inner.contains('(') => inner.to_string(),
            _ => out,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn p(cs: &[i64]) -> UniPoly<Rational> {
        UniPoly::from_coeffs(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn single_linear_factor_is_bare() {
        assert_eq!(p(&[1, 1]).render_factored(), "x+1");
        assert_eq!(p(&[-3, 1]).render_factored(), "x-3");
        assert_eq!(p(&[1, 2, 1]).render_factored(), "(x+1)^2");
        assert_eq!(p(&[2, 3, 1]).render_factored(), "(x+1)(x+2)");
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, 3, 3, 1]);
        let d = p(&[1, 1]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, p(&[1, 2, 1]));
    }

    #[test]
    fn gcd_is_monic() {
        let a = p(&[2, 4, 2]);
        let b = p(&[3, 3]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
    }

    #[test]
    fn shift_moves_roots() {
        let a = UniPoly::from_shifts(&[int(1), int(2)]);
        assert_eq!(a.shift(&int(-1)), UniPoly::from_shifts(&[int(0), int(1)]));
    }

    #[test]
    fn factored_rendering() {
        assert_eq!(UniPoly::from_shifts(&[int(1), int(1), int(1)]).render_factored(), "(x+1)^3");
        let b = UniPoly::from_shifts(&[rat(3, 4), rat(1, 2), int(0), rat(1, 4)]);
        assert_eq!(b.render_factored(), "x(x+1/4)(x+1/2)(x+3/4)");
        assert_eq!(p(&[1, 0, 1]).render_factored(), "x^2+1");
        assert_eq!(p(&[-6, 5, 1]).render_factored(), "(x-1)(x+6)");
    }

    #[test]
    fn coefficient_rendering() {
        assert_eq!(p(&[1, 3, 3, 1]).render("x"), "x^3+3*x^2+3*x+1");
        assert_eq!(p(&[0, -1]).render("L"), "-L");
        assert_eq!(UniPoly::from_coeffs(vec![rat(-1, 2), rat(3, 2)]).render("L"), "3/2*L-1/2");
    }
}
