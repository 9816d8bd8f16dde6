//! Text syntax for `(a,b)`-algebra elements and expansion targets.
//!
//! Operators: sums of products of integers, fractions, the parameter (`L`
//! or `λ`), `a`, `b` and parenthesized groups, with optional `*`, `^` and
//! division by a scalar, e.g. `(a-13/4b)(a-5/2b)a`, `4^4*(a-3b)`, `256/L^4*a^4`.
//!
//! Targets: sums of terms `c * s^e * Log^j * v_r`, e.g. `s^1*Log^2`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ab::AbElement;
use crate::error::{Error, Result};
use crate::scalar::{int, ParamScalar, Rational, Scalar};
use crate::xi::{BasisTerm, LogExpansion, Space};

type E = AbElement<ParamScalar>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax { offset, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                it.next();
            }
            out.push((i, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let mut run = Vec::new();
            while let Some(&(k, d)) = it.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                run.push((k, d));
                it.next();
            }
            let word: String = run.iter().map(|(_, d)| d).collect();
            if run.len() > 1 && run.iter().all(|(_, d)| is_single(*d)) {
                // juxtaposed operator letters such as "ab"
                out.extend(run.iter().map(|(k, d)| (*k, Tok::Ident(d.to_string()))));
            } else {
                out.push((i, Tok::Ident(word)));
            }
        } else if "+-*/^()⊗".contains(c) {
            out.push((i, Tok::Sym(c)));
            it.next();
        } else {
            return Err(syntax(i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

fn is_single(c: char) -> bool {
    matches!(c, 'a' | 'b' | 'L' | 'λ')
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser { toks: tokenize(text)?, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn integer(&mut self) -> Result<BigInt> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(syntax(self.offset(), "expected an integer")),
        }
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        if !self.eat('^') {
            return Ok(None);
        }
        let at = self.offset();
        let e = self.integer()?;
        e.to_i64().map(Some).ok_or_else(|| syntax(at, "exponent too large"))
    }

    fn starts_unit(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')))
    }

    fn expr(&mut self) -> Result<E> {
        let mut acc = E::zero();
        let mut first = true;
        loop {
            let sign = if self.eat('-') {
                -ParamScalar::one()
            } else {
                if !self.eat('+') && !first {
                    break;
                }
                ParamScalar::one()
            };
            if !self.starts_unit() {
                return Err(syntax(self.offset(), "expected a term"));
            }
            acc = acc + self.term()?.scale(&sign);
            first = false;
            if !matches!(self.peek(), Some(Tok::Sym('+')) | Some(Tok::Sym('-'))) {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<E> {
        let mut acc = self.unit()?;
        loop {
            if self.eat('*') {
                if !self.starts_unit() {
                    return Err(syntax(self.offset(), "expected a factor after '*'"));
                }
                acc = acc * self.unit()?;
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unit()?;
                let c = as_scalar(&d).ok_or_else(|| syntax(at, "can only divide by a scalar"))?;
                let inv = c.inv().map_err(|_| syntax(at, "division by zero"))?;
                acc = acc.scale(&inv);
            } else if self.starts_unit() {
                acc = acc * self.unit()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unit(&mut self) -> Result<E> {
        let at = self.offset();
        let base = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                E::scalar(ParamScalar::from_rational(&Rational::from_integer(n)))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "a" => E::a(),
                    "b" => E::b(),
                    "L" | "λ" => E::scalar(ParamScalar::lambda()),
                    _ => return Err(syntax(at, format!("unknown identifier '{id}'"))),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.offset(), "expected ')'"));
                }
                inner
            }
            _ => return Err(syntax(at, "expected a factor")),
        };
        let eat = self.offset();
        match self.exponent()? {
            None => Ok(base),
            Some(e) if e >= 0 => Ok(base.pow(e as u32)),
            Some(e) => {
                let c = as_scalar(&base).ok_or_else(|| syntax(eat, "negative exponent on a non-scalar"))?;
                let p = c.powi(e as i32).map_err(|_| syntax(eat, "negative power of zero"))?;
                Ok(E::scalar(p))
            }
        }
    }
}

fn as_scalar(e: &E) -> Option<ParamScalar> {
    match e.degree() {
        None => Some(ParamScalar::zero()),
        Some(0) => Some(e.coeff(0, 0)),
        _ => None,
    }
}

/// Parses an operator; the parameter may appear.
pub fn parse_ab(text: &str) -> Result<E> {
    let mut p = Parser::new(text)?;
    if p.at_end() {
        return Err(syntax(0, "empty expression"));
    }
    let e = p.expr()?;
    if !p.at_end() {
        return Err(syntax(p.offset(), "unexpected input"));
    }
    Ok(e)
}

/// Parses an operator with rational coefficients.
pub fn parse_ab_rational(text: &str) -> Result<AbElement<Rational>> {
    parse_ab(text)?.try_map(|c| c.to_rational().ok_or_else(|| Error::InvalidCase(format!("'{text}' depends on the parameter"))))
}

/// Parses a parameter-dependent scalar such as `1/L^4` or `3/2`.
pub fn parse_scalar(text: &str) -> Result<ParamScalar> {
    let e = parse_ab(text)?;
    as_scalar(&e).ok_or_else(|| syntax(0, "expected a scalar"))
}

/// Parses a rational number such as `-3/4`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    parse_scalar(text)?.to_rational().ok_or_else(|| syntax(0, "expected a rational number"))
}

fn rational_literal(p: &mut Parser) -> Result<Rational> {
    let neg = p.eat('-');
    let n = match p.peek().cloned() {
        Some(Tok::Num(n)) => {
            p.pos += 1;
            n
        }
        _ => return Err(syntax(p.offset(), "expected a number")),
    };
    let mut r = Rational::from_integer(n);
    if p.eat('/') {
        let at = p.offset();
        let d = p.integer()?;
        if d.is_zero() {
            return Err(syntax(at, "division by zero"));
        }
        r /= Rational::from_integer(d);
    }
    Ok(if neg { -r } else { r })
}

/// Parses a target expansion; exponents of `s` are the real exponents
/// `alpha + m - 1`.
pub fn parse_expansion(text: &str, space: &Space) -> Result<LogExpansion<Rational>> {
    let mut p = Parser::new(text)?;
    let mut out = LogExpansion::zero(space);
    if p.at_end() {
        return Err(syntax(0, "empty expression"));
    }
    let mut first = true;
    while !p.at_end() {
        let mut coef = Rational::one();
        if p.eat('-') {
            coef = -coef;
        } else if !p.eat('+') && !first {
            return Err(syntax(p.offset(), "expected '+' or '-'"));
        }
        first = false;
        let mut exponent = Rational::zero();
        let mut j = 0usize;
        let mut r = 0usize;
        loop {
            let at = p.offset();
            match p.peek().cloned() {
                Some(Tok::Num(_)) => {
                    coef *= rational_literal(&mut p)?;
                }
                Some(Tok::Ident(id)) if id == "s" => {
                    p.pos += 1;
                    exponent += match p.eat('^') {
                        true => {
                            if p.eat('(') {
                                let v = rational_literal(&mut p)?;
                                if !p.eat(')') {
                                    return Err(syntax(p.offset(), "expected ')'"));
                                }
                                v
                            } else {
                                rational_literal(&mut p)?
                            }
                        }
                        false => Rational::one(),
                    };
                }
                Some(Tok::Ident(id)) if id == "Log" => {
                    p.pos += 1;
                    let e = p.exponent()?.unwrap_or(1);
                    if e < 0 {
                        return Err(syntax(at, "negative log power"));
                    }
                    j += e as usize;
                }
                Some(Tok::Ident(id)) if id.starts_with("v_") => {
                    p.pos += 1;
                    let k: usize = id[2..].parse().map_err(|_| syntax(at, "expected v_<index>"))?;
                    if k == 0 {
                        return Err(syntax(at, "vector indices start at 1"));
                    }
                    r = k - 1;
                }
                Some(Tok::Ident(id)) => return Err(syntax(at, format!("unknown identifier '{id}'"))),
                _ => return Err(syntax(at, "expected a term")),
            }
            if !(p.eat('*') || p.eat('⊗')) {
                break;
            }
        }
        let m = exponent.clone() - space.alpha.clone() + int(1);
        if !m.is_integer() || m.is_negative() {
            return Err(syntax(0, format!("s^{exponent} is not of the form s^(alpha+m-1)")));
        }
        let m = m.to_integer().to_usize().ok_or_else(|| syntax(0, "exponent too large"))?;
        if m >= space.truncation || j > space.log_bound || j < space.min_log() || r >= space.dim_v {
            return Err(Error::TruncationTooSmall(format!("term s^{exponent}*Log^{j} lies outside the space")));
        }
        out.add_term(BasisTerm::new(m, j, r), coef);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn factors(l: &[Rational], lead: i64) -> E {
        let l: Vec<ParamScalar> = l.iter().map(ParamScalar::from_rational).collect();
        E::from_linear_factors(&l, ParamScalar::from_i64(lead))
    }

    #[test]
    fn products_of_factors() {
        assert_eq!(parse_ab("(a-3b)(a-2b)(a-b)").unwrap(), factors(&[int(3), int(2), int(1)], 1));
        assert_eq!(parse_ab("(4a-11b)(a-3b)(a-b)").unwrap(), factors(&[rat(11, 4), int(3), int(1)], 4));
        assert_eq!(parse_ab("4^4*(a-13/4b)(a-5/2b)(a-7/4b)a").unwrap(), factors(&[rat(13, 4), rat(5, 2), rat(7, 4), int(0)], 256));
    }

    #[test]
    fn commutator_syntax() {
        assert_eq!(parse_ab("ab - ba").unwrap(), parse_ab("b^2").unwrap());
        assert_eq!(parse_ab("a*b").unwrap(), parse_ab("ab").unwrap());
    }

    #[test]
    fn parameter() {
        let e = parse_ab("256/L^4*a^4").unwrap();
        let c = ParamScalar::from_i64(256) * ParamScalar::lambda().powi(-4).unwrap();
        assert_eq!(e, E::monomial(c.clone(), 0, 4));
        assert_eq!(parse_ab("256 L^-4 a^4").unwrap(), E::monomial(c, 0, 4));
        assert_eq!(parse_ab("λa").unwrap(), parse_ab("L*a").unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse_ab("a-"), Err(Error::Syntax { offset: 2, message: "expected a term".into() }));
        assert!(matches!(parse_ab("a+c"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_ab("(a-b"), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse_ab("a/b"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_ab("a/0"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_ab(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_ab("a^-1"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse_ab("a $"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn rational_only() {
        assert!(parse_ab_rational("L*a").is_err());
        assert_eq!(parse_ab_rational("a-b").unwrap(), AbElement::linear_factor(&int(1)));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
    }

    #[test]
    fn targets() {
        let sp = Space::theta(12);
        let x = parse_expansion("s^1*Log^2", &sp).unwrap();
        assert_eq!(x, LogExpansion::term(&sp, 1, 2, 0, int(1)));
        assert_eq!(parse_expansion("Log^2", &sp).unwrap(), LogExpansion::term(&sp, 0, 2, 0, int(1)));
        assert_eq!(parse_expansion("s*Log^1", &sp).unwrap(), LogExpansion::term(&sp, 1, 1, 0, int(1)));
        let y = parse_expansion("1/24*s^4*Log^2 - 3*s^4*Log^1", &sp).unwrap();
        assert_eq!(y.render(), "1/24*s^4*Log^2 - 3*s^4*Log^1");
        assert!(parse_expansion("s^(1/2)*Log^1", &sp).is_err());
        assert!(parse_expansion("Log^3", &sp).is_err());
        assert!(parse_expansion("s^40*Log^1", &sp).is_err());
        assert!(parse_expansion("q*Log^1", &sp).is_err());
    }
}
