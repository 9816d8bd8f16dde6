//! Normal-form arithmetic in the algebra generated by `a` and `b` with
//! `ab - ba = b^2`.
//!
//! Every element is stored in the basis `b^i a^j` (all `a`s to the right).
//! Products are normalized with the closed commutation rule
//! `a^j b^k = sum_t C(j,t) k(k+1)...(k+t-1) b^(k+t) a^(j-t)`, which is the
//! `j`-fold iterate of `a b^n = b^n a + n b^(n+1)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{Rational, Scalar};

/// The basis monomial `b^b a^a`. Ordered by total degree, then by `b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AbMonomial {
    pub b: u32,
    pub a: u32,
}

impl AbMonomial {
    pub fn new(b: u32, a: u32) -> Self {
        AbMonomial { b, a }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b
    }
}

impl Ord for AbMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.b).cmp(&(other.degree(), other.b))
    }
}

impl PartialOrd for AbMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbElement<S> {
    terms: BTreeMap<AbMonomial, S>,
}

/// Result of [`AbElement::classify`].
#[derive(Clone, Debug, PartialEq)]
pub struct Classification<S> {
    pub degree: Option<u32>,
    pub is_homogeneous: bool,
    pub is_monic_in_a: bool,
    pub a_degree: Option<u32>,
    pub homogeneous_parts: Vec<AbElement<S>>,
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    for i in 0..k {
        acc = acc * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    acc
}

fn rising(k: u32, t: u32) -> Rational {
    (0..t).fold(Rational::from_integer(1.into()), |acc, q| acc * Rational::from_integer((k + q).into()))
}

impl<S: Scalar> AbElement<S> {
    pub fn zero() -> Self {
        AbElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(S::one())
    }

    pub fn scalar(c: S) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c * b^b_exp * a^a_exp`.
    pub fn monomial(c: S, b_exp: u32, a_exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(AbMonomial::new(b_exp, a_exp), c);
        }
        AbElement { terms }
    }

    pub fn a() -> Self {
        Self::monomial(S::one(), 0, 1)
    }

    pub fn b() -> Self {
        Self::monomial(S::one(), 1, 0)
    }

    /// `c1 * a + c2 * b`.
    pub fn linear(ca: S, cb: S) -> Self {
        let mut out = Self::monomial(ca, 0, 1);
        out.add_term(AbMonomial::new(1, 0), cb);
        out
    }

    /// `a - lambda * b`.
    pub fn linear_factor(lambda: &S) -> Self {
        Self::linear(S::one(), -lambda.clone())
    }

    /// `lead * (a - l_1 b)(a - l_2 b)...(a - l_p b)`, leftmost factor first.
    pub fn from_linear_factors(lambdas: &[S], lead: S) -> Self {
        lambdas
            .iter()
            .fold(Self::scalar(lead), |acc, l| acc * Self::linear_factor(l))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (AbMonomial, S)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: AbMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AbMonomial, &S)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, b_exp: u32, a_exp: u32) -> S {
        self.terms.get(&AbMonomial::new(b_exp, a_exp)).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn a_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.a).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    /// Homogeneous of degree `p` with coefficient of `a^p` equal to one.
    pub fn is_monic_in_a(&self) -> bool {
        match self.degree() {
            Some(p) => self.is_homogeneous() && self.coeff(0, p).is_one(),
            None => false,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AbElement { terms: self.terms.iter().map(|(m, v)| (*m, v.clone() * c.clone())).collect() }
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        AbElement {
            terms: self.terms.iter().filter(|(m, _)| m.degree() == degree).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn homogeneous_parts(&self) -> Vec<Self> {
        let mut degs: Vec<u32> = self.terms.keys().map(|m| m.degree()).collect();
        degs.dedup();
        degs.into_iter().map(|d| self.homogeneous_part(d)).collect()
    }

    pub fn classify(&self) -> Classification<S> {
        Classification {
            degree: self.degree(),
            is_homogeneous: self.is_homogeneous(),
            is_monic_in_a: self.is_monic_in_a(),
            a_degree: self.a_degree(),
            homogeneous_parts: self.homogeneous_parts(),
        }
    }

    /// Rescales a homogeneous element so that its `a^p` coefficient is one.
    pub fn monic_normalized(&self) -> Result<(S, Self)> {
        if !self.is_homogeneous() || self.is_zero() {
            return Err(Error::NotHomogeneous);
        }
        let p = self.degree().expect("nonzero");
        let lead = self.coeff(0, p);
        if lead.is_zero() {
            return Err(Error::NotMonicInA);
        }
        Ok((lead.clone(), self.scale(&lead.inv()?)))
    }

    /// `b^p (b^-1 a)^k (-1)^(p+k) = (-1)^(p+k) b^(p-k) (a-(k-1)b)...(a-b) a`.
    fn bernstein_basis(p: u32, k: u32) -> Self {
        let mut e = Self::one();
        for q in (0..k).rev() {
            e = e * Self::linear_factor(&S::from_i64(q as i64));
        }
        let sign = if (p + k).is_multiple_of(2) { S::one() } else { -S::one() };
        Self::monomial(sign, p - k, 0) * e
    }

    /// The polynomial `B_P` defined by `(-b)^p B_P(-b^-1 a) = P`, computed
    /// by solving the triangular system in the basis `(-b)^p (-b^-1 a)^k`.
    pub fn bernstein_poly(&self) -> Result<UniPoly<S>> {
        if self.is_zero() {
            return Err(Error::NotMonicInA);
        }
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        if !self.is_monic_in_a() {
            return Err(Error::NotMonicInA);
        }
        let p = self.degree().expect("nonzero");
        let basis: Vec<Self> = (0..=p).map(|k| Self::bernstein_basis(p, k)).collect();
        let mut beta = vec![S::zero(); p as usize + 1];
        for k in (0..=p).rev() {
            let mut rhs = self.coeff(p - k, k);
            for kk in (k + 1)..=p {
                rhs = rhs - beta[kk as usize].clone() * basis[kk as usize].coeff(p - k, k);
            }
            let diag = basis[k as usize].coeff(p - k, k);
            beta[k as usize] = rhs.checked_div(&diag)?;
        }
        Ok(UniPoly::from_coeffs(beta))
    }

    /// Writes `self = quotient * divisor + remainder` with the `a`-degree of
    /// the remainder below that of the divisor. The divisor must be of the
    /// form `a^d + (terms of a-degree < d)`.
    pub fn right_divide(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor.a_degree().ok_or(Error::DivisorNotMonic)?;
        if d == 0 || !divisor.coeff(0, d).is_one() || divisor.terms.keys().filter(|m| m.a == d).count() != 1 {
            return Err(Error::DivisorNotMonic);
        }
        let mut rem = self.clone();
        let mut quot = Self::zero();
        loop {
            let Some((m, c)) = rem
                .terms
                .iter()
                .filter(|(m, _)| m.a >= d)
                .max_by_key(|(m, _)| (m.a, m.b))
                .map(|(m, c)| (*m, c.clone()))
            else {
                break;
            };
            let q = Self::monomial(c, m.b, m.a - d);
            rem = rem - q.clone() * divisor.clone();
            quot = quot + q;
        }
        Ok((quot, rem))
    }

    pub fn try_map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<AbElement<T>> {
        let mut out = AbElement::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AbElement<T> {
        self.try_map(|c| Ok(f(c))).expect("infallible")
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self.clone())
    }

    /// Canonical text: `c*b^i*a^j` terms, degree-ascending then
    /// `i`-ascending.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in &self.terms {
            let (neg, mag) = c.signed_parts();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if mag != "1" || m.degree() == 0 {
                factors.push(mag);
            }
            for (sym, e) in [("b", m.b), ("a", m.a)] {
                match e {
                    0 => {}
                    1 => factors.push(sym.to_string()),
                    _ => factors.push(format!("{sym}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl<S: Scalar> fmt::Display for AbElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<S: Scalar> Add for AbElement<S> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<S: Scalar> Sub for AbElement<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<S: Scalar> Neg for AbElement<S> {
    type Output = Self;
    fn neg(self) -> Self {
        AbElement { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<S: Scalar> Mul for AbElement<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let c = c1.clone() * c2.clone();
                // b^i (a^j b^k) a^l
                let (i, j, k, l) = (m1.b, m1.a, m2.b, m2.a);
                let tmax = if k == 0 { 0 } else { j };
                for t in 0..=tmax {
                    let coef = S::from_rational(&(binomial(j, t) * rising(k, t)));
                    out.add_term(AbMonomial::new(i + k + t, j - t + l), c.clone() * coef);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    type E = AbElement<Rational>;

    fn lin(l: Rational) -> E {
        E::linear_factor(&l)
    }

    /// Left multiplication by `a` using only the single-step rewriting.
    fn left_mul_a_stepwise(x: &E) -> E {
        let mut out = E::zero();
        for (m, c) in x.terms() {
            out = out + E::monomial(c.clone(), m.b, m.a + 1);
            if m.b > 0 {
                out = out + E::monomial(c.clone() * int(m.b as i64), m.b + 1, m.a);
            }
        }
        out
    }

    #[test]
    fn ab_product() {
        let ab = E::a() * E::b();
        assert_eq!(ab, E::from_terms([(AbMonomial::new(1, 1), int(1)), (AbMonomial::new(2, 0), int(1))]));
    }

    #[test]
    fn a_times_b_squared() {
        let x = E::a() * E::b().pow(2);
        assert_eq!(x, E::monomial(int(1), 2, 1) + E::monomial(int(2), 3, 0));
    }

    #[test]
    fn unit_law() {
        let p = lin(int(3)) * lin(int(2));
        assert_eq!(E::one() * p.clone(), p);
        assert_eq!(p.clone() * E::one(), p);
    }

    #[test]
    fn closed_rule_matches_stepwise_rewriting() {
        for n in 0..=20u32 {
            let bn = E::monomial(int(1), n, 0);
            let mut stepwise = bn.clone();
            for j in 1..=3u32 {
                stepwise = left_mul_a_stepwise(&stepwise);
                assert_eq!(E::a().pow(j) * bn.clone(), stepwise, "a^{j} b^{n}");
            }
        }
    }

    #[test]
    fn two_factor_expansion() {
        let p = E::from_linear_factors(&[int(2), int(1)], int(1));
        let expected = E::from_terms([
            (AbMonomial::new(0, 2), int(1)),
            (AbMonomial::new(1, 1), int(-3)),
            (AbMonomial::new(2, 0), int(1)),
        ]);
        assert_eq!(p, expected);
        assert!(p.is_monic_in_a());
        assert_eq!(p.render(), "a^2 - 3*b*a + b^2");
    }

    #[test]
    fn single_factor() {
        let l = rat(7, 3);
        assert_eq!(E::from_linear_factors(std::slice::from_ref(&l), int(1)), E::a() - E::b().scale(&l));
    }

    #[test]
    fn two_factorizations_of_the_degree_four_chain() {
        let lead = int(256);
        let q1 = E::from_linear_factors(&[int(3), rat(9, 4), rat(3, 2), rat(3, 4)], lead.clone());
        let q2 = E::from_linear_factors(&[rat(13, 4), rat(5, 2), rat(7, 4), int(0)], lead);
        assert_eq!(q1, q2);
        let b1 = q1.monic_normalized().unwrap().1.bernstein_poly().unwrap();
        let b2 = q2.monic_normalized().unwrap().1.bernstein_poly().unwrap();
        assert_eq!(b1, b2);
    }

    #[test]
    fn bernstein_golden_values() {
        let p = E::from_linear_factors(&[int(3), int(2), int(1)], int(1));
        assert_eq!(p.bernstein_poly().unwrap(), UniPoly::from_shifts(&[int(1), int(1), int(1)]));
        let q = E::from_linear_factors(&[rat(13, 4), rat(5, 2), rat(7, 4), int(0)], int(1));
        assert_eq!(q.bernstein_poly().unwrap(), UniPoly::from_shifts(&[int(0), rat(1, 4), rat(1, 2), rat(3, 4)]));
        assert_eq!(E::a().bernstein_poly().unwrap(), UniPoly::x());
        let r = E::from_linear_factors(&[rat(11, 4), int(3), int(1)], int(1));
        assert_eq!(r.bernstein_poly().unwrap(), UniPoly::from_shifts(&[rat(3, 4), int(2), int(1)]));
    }

    #[test]
    fn bernstein_preconditions() {
        assert_eq!(E::b().bernstein_poly(), Err(Error::NotMonicInA));
        assert_eq!((E::a() + E::one()).bernstein_poly(), Err(Error::NotHomogeneous));
        assert_eq!(E::a().scale(&int(2)).bernstein_poly(), Err(Error::NotMonicInA));
    }

    #[test]
    fn right_division() {
        let p = lin(int(2)) * lin(int(1));
        let (q, r) = p.right_divide(&lin(int(1))).unwrap();
        assert_eq!(q, lin(int(2)));
        assert!(r.is_zero());

        let (q, r) = p.right_divide(&lin(int(2))).unwrap();
        assert!(!r.is_zero());
        assert_eq!(q * lin(int(2)) + r, p);

        let big = E::from_linear_factors(&[int(3), rat(9, 4), rat(3, 2), rat(3, 4)], int(256));
        let (q, r) = big.right_divide(&E::a()).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, E::from_linear_factors(&[rat(13, 4), rat(5, 2), rat(7, 4)], int(256)));
    }

    #[test]
    fn right_division_rejects_non_monic() {
        let p = lin(int(2));
        assert_eq!(p.right_divide(&E::b()), Err(Error::DivisorNotMonic));
        assert_eq!(p.right_divide(&E::a().scale(&int(4))), Err(Error::DivisorNotMonic));
    }

    #[test]
    fn classification() {
        let p3 = E::from_linear_factors(&[int(3), int(2), int(1)], int(1));
        let p4 = E::from_linear_factors(&[rat(13, 4), rat(5, 2), rat(7, 4), int(0)], int(256));
        let c = (p3.clone() + p4).classify();
        assert_eq!(c.degree, Some(4));
        assert!(!c.is_homogeneous);
        assert_eq!(c.homogeneous_parts.len(), 2);
        assert_eq!(c.homogeneous_parts[0], p3);

        let c = lin(int(1)).classify();
        assert_eq!(c.degree, Some(1));
        assert!(c.is_homogeneous && c.is_monic_in_a);

        assert!(E::zero().classify().homogeneous_parts.is_empty());
    }
}
