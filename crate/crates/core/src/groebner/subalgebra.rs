use std::sync::Arc;

use super::ideal::{GroebnerBasis, Ideal};
use crate::arith::{MonomialOrder, Polynomial, Ring, RingRef};
use crate::error::{Error, Result};

/// Decides membership in `k[allowed, g_1, ..., g_m] + I` by elimination.
///
/// Works in `k[eliminated, allowed, tags]` with a block order eliminating the
/// original variables that are not allowed, modulo `I + <tag_i - g_i>`.
/// An element lies in the subalgebra exactly when its normal form is free of
/// the eliminated block.
#[derive(Debug, Clone)]
pub struct SubalgebraOracle {
    source: RingRef,
    work: RingRef,
    output: RingRef,
    split: usize,
    basis: Arc<GroebnerBasis>,
}

impl SubalgebraOracle {
    pub fn new(ideal: &Ideal, tags: &[(String, Polynomial)], allowed: &[String]) -> Result<Self> {
        let source = ideal.ring().clone();
        for a in allowed {
            source.require(a)?;
        }
        for (t, g) in tags {
            if source.index_of(t).is_some() {
                return Err(Error::DuplicateVariable(t.clone()));
            }
            Ring::check_same(g.ring(), &source)?;
        }
        let eliminated: Vec<String> = source
            .names()
            .iter()
            .filter(|n| !allowed.contains(n))
            .cloned()
            .collect();
        let kept: Vec<String> = source
            .names()
            .iter()
            .filter(|n| allowed.contains(n))
            .cloned()
            .chain(tags.iter().map(|(t, _)| t.clone()))
            .collect();
        let work = Ring::new(eliminated.iter().chain(kept.iter()).cloned())?;
        let output = Ring::new(kept)?;
        let mut gens: Vec<Polynomial> = ideal
            .generators()
            .iter()
            .map(|g| g.embed(&work))
            .collect::<Result<_>>()?;
        for (t, g) in tags {
            let tv = Polynomial::var_named(&work, t)?;
            gens.push(&tv - &g.embed(&work)?);
        }
        let split = eliminated.len();
        let basis = Ideal::new(&work, gens)
            .with_order(MonomialOrder::elimination(split))
            .basis()?;
        Ok(SubalgebraOracle {
            source,
            work,
            output,
            split,
            basis,
        })
    }

    /// Ring of the expressions: allowed variables, then tags.
    pub fn output_ring(&self) -> &RingRef {
        &self.output
    }

    /// `Some(p)` with `f ≡ p(allowed, g)` modulo the ideal, or `None`.
    pub fn express(&self, f: &Polynomial) -> Result<Option<Polynomial>> {
        Ring::check_same(f.ring(), &self.source)?;
        let nf = self.basis.reduce(&f.embed(&self.work)?);
        if nf.support().iter().any(|&i| i < self.split) {
            return Ok(None);
        }
        Ok(Some(nf.embed(&self.output)?))
    }

    /// Relations among allowed variables and tags: the kernel of
    /// `k[allowed, tags] -> k[source]/I`.
    pub fn relations(&self) -> Result<Ideal> {
        let mut out = Vec::new();
        for g in self.basis.polynomials() {
            if g.support().iter().all(|&i| i >= self.split) {
                out.push(g.embed(&self.output)?);
            }
        }
        Ok(Ideal::new(&self.output, out))
    }
}

/// Express `f` as a polynomial in the tags modulo `ideal`, or `None` if `f` is
/// not in the subalgebra generated by the tagged elements.
pub fn subalgebra_express(
    f: &Polynomial,
    tags: &[(String, Polynomial)],
    ideal: &Ideal,
) -> Result<Option<Polynomial>> {
    SubalgebraOracle::new(ideal, tags, &[])?.express(f)
}
