//! Exact computer algebra for coisotropic reduction of Hamiltonian actions of
//! affine symplectic groupoids on affine Poisson schemes.
//!
//! Everything is computed over the rationals with Groebner bases; a scheme is a
//! finitely presented algebra and every geometric statement is checked as an
//! ideal-membership question.

pub mod arith;
mod error;

pub use error::{Error, Result};
pub mod groebner;
pub mod algebra;
pub mod check;
pub mod poisson;
pub mod groupoid;
pub mod action;
pub mod reduction;
pub mod corpus;
