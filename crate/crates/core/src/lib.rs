//! Exact computation of annihilators, Bernstein polynomials and higher
//! Bernstein polynomials of frescos attached to a germ with `n+2` monomials
//! and a monomial volume form.

pub mod ab;
pub mod case;
pub mod cli;
pub mod error;
pub mod euler;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod reproduce;
pub mod scalar;
pub mod theme;
pub mod xi;

pub use ab::{AbElement, AbMonomial};
pub use error::{Error, Result};
pub use poly::UniPoly;
pub use scalar::{ParamScalar, Rational, Scalar};
pub use xi::{AffineExpansion, LogExpansion, Space};
