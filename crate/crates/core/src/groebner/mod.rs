//! Groebner bases and the decision procedures built on them: normal forms,
//! ideal membership, elimination and subalgebra membership.

mod buchberger;
mod ideal;
mod subalgebra;

use std::sync::atomic::{AtomicUsize, Ordering};

pub use ideal::{GroebnerBasis, Ideal};
pub use subalgebra::{subalgebra_express, SubalgebraOracle};

use crate::arith::{MonomialOrder, Polynomial, Ring, RingRef};
use crate::error::Result;
use std::sync::Arc;

/// Default cap on processed S-pairs per Groebner computation.
pub const DEFAULT_BUDGET: usize = 50_000;

static BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_BUDGET);

/// Set the S-pair cap used by every subsequent computation in this process.
pub fn set_budget(pairs: usize) {
    BUDGET.store(pairs.max(1), Ordering::Relaxed);
}

pub fn budget() -> usize {
    BUDGET.load(Ordering::Relaxed)
}

/// Reduced Groebner basis of `ideal` in `order`.
pub fn groebner_basis(ideal: &Ideal, order: &MonomialOrder) -> Result<Arc<GroebnerBasis>> {
    ideal.basis_in(order)
}

/// Unique remainder of `f` modulo `ideal` in `order`.
pub fn normal_form(f: &Polynomial, ideal: &Ideal, order: &MonomialOrder) -> Result<Polynomial> {
    Ok(ideal.basis_in(order)?.reduce(f))
}

pub fn ideal_membership(f: &Polynomial, ideal: &Ideal) -> Result<bool> {
    ideal.contains(f)
}

/// `I ∩ k[keep]`, returned as an ideal over the ring of kept variables
/// (in their original relative order).
pub fn elimination_ideal(ideal: &Ideal, keep: &[&str]) -> Result<Ideal> {
    let ring = ideal.ring();
    for k in keep {
        ring.require(k)?;
    }
    let kept: Vec<String> = ring
        .names()
        .iter()
        .filter(|n| keep.contains(&n.as_str()))
        .cloned()
        .collect();
    let dropped: Vec<String> = ring
        .names()
        .iter()
        .filter(|n| !keep.contains(&n.as_str()))
        .cloned()
        .collect();
    let work: RingRef = Ring::new(dropped.iter().chain(kept.iter()).cloned())?;
    let order = MonomialOrder::elimination(dropped.len());
    let gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .map(|g| g.embed(&work))
        .collect::<Result<_>>()?;
    let gb = Ideal::new(&work, gens).basis_in(&order)?;
    let target = Ring::new(kept)?;
    let mut out = Vec::new();
    for g in gb.polynomials() {
        if g.support().iter().all(|&i| i >= dropped.len()) {
            out.push(g.embed(&target)?);
        }
    }
    Ok(Ideal::new(&target, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly;

    fn ring(names: &[&str]) -> RingRef {
        Ring::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn linear_chain_lex() {
        let r = ring(&["x", "y", "z"]);
        let i = Ideal::new(&r, vec![poly(&r, "x - y"), poly(&r, "y - z")]);
        let gb = groebner_basis(&i, &MonomialOrder::Lex).unwrap();
        assert_eq!(gb.polynomials(), &[poly(&r, "x - z"), poly(&r, "y - z")]);
    }

    #[test]
    fn normal_form_example() {
        let r = ring(&["x", "y"]);
        let i = Ideal::new(&r, vec![poly(&r, "x - y")]);
        let nf = normal_form(&poly(&r, "x^2 + y"), &i, &MonomialOrder::Lex).unwrap();
        assert_eq!(nf, poly(&r, "y^2 + y"));
    }

    #[test]
    fn membership_example() {
        let r = ring(&["x", "y"]);
        let i = Ideal::new(&r, vec![poly(&r, "x"), poly(&r, "x - y")]);
        assert!(ideal_membership(&poly(&r, "y"), &i).unwrap());
        assert!(!ideal_membership(&poly(&r, "1"), &i).unwrap());
    }

    #[test]
    fn twisted_cubic_elimination() {
        let r = ring(&["x", "y", "z"]);
        let i = Ideal::new(&r, vec![poly(&r, "y - x^2"), poly(&r, "z - x^3")]);
        let e = elimination_ideal(&i, &["y", "z"]).unwrap();
        let s = e.ring().clone();
        assert_eq!(e.reduced_generators().unwrap(), vec![poly(&s, "y^3 - z^2")]);
    }

    #[test]
    fn elimination_to_zero() {
        let r = ring(&["x", "y"]);
        let i = Ideal::new(&r, vec![poly(&r, "x - y^2")]);
        let e = elimination_ideal(&i, &["y"]).unwrap();
        assert!(e.reduced_generators().unwrap().is_empty());
    }

    #[test]
    fn budget_error() {
        let r = ring(&["x", "y", "z"]);
        let i = Ideal::new(
            &r,
            vec![poly(&r, "x^2 - y"), poly(&r, "x*y - z")],
        );
        let gb = buchberger::buchberger(
            i.generators()
                .iter()
                .map(|g| buchberger::to_terms(g, &MonomialOrder::GrevLex))
                .collect(),
            &MonomialOrder::GrevLex,
            0,
        );
        assert!(matches!(gb, Err(crate::Error::BudgetExceeded { .. })), "{gb:?}");
    }

    #[test]
    fn unit_ideal() {
        let r = ring(&["x", "y"]);
        let i = Ideal::new(&r, vec![poly(&r, "x*y - 1"), poly(&r, "x")]);
        assert_eq!(i.reduced_generators().unwrap(), vec![poly(&r, "1")]);
    }
}
