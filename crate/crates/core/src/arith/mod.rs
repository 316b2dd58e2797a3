//! Exact rational polynomial arithmetic over named variable lists.

mod monomial;
mod order;
mod parse;
mod polynomial;
mod ring;

pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use polynomial::{ArithOp, Polynomial};
pub use ring::{is_identifier, Ring, RingRef};

/// Rational coefficients.
pub type Q = num_rational::BigRational;

/// `n` as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// `a / b` as a rational.
pub fn qf(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}

/// Parse a polynomial, panicking on error. Intended for fixtures and tests.
pub fn poly(ring: &RingRef, text: &str) -> Polynomial {
    Polynomial::parse(ring, text).unwrap_or_else(|e| panic!("bad polynomial `{text}`: {e}"))
}
