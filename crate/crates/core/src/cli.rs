//! Command implementations behind the `fresco` binary.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::parse::{parse_ab, parse_expansion};
use crate::poly::UniPoly;
use crate::scalar::{ParamScalar, Rational, Scalar};
use crate::xi::Space;

/// Exit status for malformed input.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status when the pipeline fails on valid input.
pub const EXIT_PIPELINE: i32 = 3;
/// Exit status when a reproduction check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;

pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_PIPELINE
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BpolyOutput {
    pub rendered: String,
    /// Set when a leading scalar was divided out.
    pub note: Option<String>,
}

/// Bernstein polynomial of a homogeneous operator, rendered factored when
/// its roots are rational.
pub fn cmd_bpoly(expr: &str) -> Result<BpolyOutput> {
    let p = parse_ab(expr)?;
    let lead = match p.degree() {
        Some(d) if p.is_homogeneous() => p.coeff(0, d),
        _ => return Err(Error::NotHomogeneous),
    };
    if lead.is_zero() {
        return Err(Error::NotMonicInA);
    }
    let note = (lead != ParamScalar::one()).then(|| format!("leading scalar {lead} ignored"));
    let monic = p.scale(&lead.inv()?);
    let b = monic.bernstein_poly()?;
    let rendered = match b.coeffs().iter().map(|c| c.to_rational()).collect::<Option<Vec<Rational>>>() {
        Some(cs) => UniPoly::from_coeffs(cs).render_factored(),
        None => b.render("x"),
    };
    Ok(BpolyOutput { rendered, note })
}

/// Applies an operator to a target in `Theta` at the given truncation.
pub fn cmd_xi(expr: &str, target: &str, truncation: usize) -> Result<String> {
    let op = parse_ab(expr)?;
    let space = Space::theta(truncation);
    let t = parse_expansion(target, &space)?.try_map(|c| Ok(ParamScalar::constant(c.clone())))?;
    let out = t.apply_op(&op);
    Ok(if out.is_zero() { "0".to_string() } else { out.render() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bpoly_of_the_cubic() {
        let out = cmd_bpoly("(a-3b)(a-2b)(a-b)").unwrap();
        assert_eq!(out.rendered, "(x+1)^3");
        assert_eq!(out.note, None);
    }

    #[test]
    fn bpoly_ignores_leading_scalar() {
        let out = cmd_bpoly("4^4*(a-13/4b)(a-5/2b)(a-7/4b)a").unwrap();
        assert_eq!(out.rendered, "x(x+1/4)(x+1/2)(x+3/4)");
        assert!(out.note.unwrap().contains("256"));
    }

    #[test]
    fn bpoly_rejects_b() {
        assert_eq!(cmd_bpoly("b").unwrap_err(), Error::NotMonicInA);
        assert_eq!(exit_code(&cmd_bpoly("a-").unwrap_err()), EXIT_VALIDATION);
        assert_eq!(exit_code(&Error::NoRelation), EXIT_PIPELINE);
    }

    #[test]
    fn xi_examples() {
        assert_eq!(cmd_xi("(a-2b)(a-b)", "Log^2", 12).unwrap(), "0");
        assert_eq!(cmd_xi("b", "Log^1", 12).unwrap(), "s*Log^1");
        let out = cmd_xi("(a-3b)(a-2b)(a-b)", "s^1*Log^2", 8).unwrap();
        assert!(out.starts_with("1/24*s^4*Log^2"), "{out}");
    }
}
