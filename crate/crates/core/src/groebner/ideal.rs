use std::sync::{Arc, OnceLock};

use super::buchberger::{buchberger, from_terms, reduce, to_terms, Terms};
use crate::arith::{Monomial, MonomialOrder, Polynomial, Ring, RingRef};
use crate::error::Result;

/// Reduced Groebner basis in a fixed order.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: RingRef,
    order: MonomialOrder,
    work: Vec<Terms>,
    polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub(crate) fn build(ring: &RingRef, gens: &[Polynomial], order: &MonomialOrder) -> Result<Self> {
        let work = buchberger(
            gens.iter().map(|g| to_terms(g, order)).collect(),
            order,
            super::budget(),
        )?;
        let polys = work.iter().map(|t| from_terms(ring, t.clone())).collect();
        Ok(GroebnerBasis {
            ring: ring.clone(),
            order: order.clone(),
            work,
            polys,
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Basis elements, monic, by descending leading monomial.
    pub fn polynomials(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.work.iter().map(|t| &t[0].0)
    }

    pub fn is_unit(&self) -> bool {
        self.work.len() == 1 && self.work[0][0].0.is_one()
    }

    /// Normal form. Panics if `f` lives over a different ring.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        assert!(Ring::same(f.ring(), &self.ring), "normal form over a different ring");
        if f.is_zero() || self.work.is_empty() {
            return f.clone();
        }
        let mask = vec![true; self.work.len()];
        let r = reduce(to_terms(f, &self.order), &self.work, &mask, &self.order);
        from_terms(&self.ring, r)
    }

    /// `m` is not divisible by any leading monomial.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.work.iter().any(|t| t[0].0.divides(m))
    }
}

/// Finitely generated ideal with a write-once cached basis in its working order.
#[derive(Debug)]
pub struct Ideal {
    ring: RingRef,
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    cache: OnceLock<Arc<GroebnerBasis>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(b) = self.cache.get() {
            let _ = cache.set(b.clone());
        }
        Ideal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            order: self.order.clone(),
            cache,
        }
    }
}

impl Ideal {
    /// Zero generators are dropped. Panics if a generator lives over another ring.
    pub fn new(ring: &RingRef, generators: Vec<Polynomial>) -> Self {
        for g in &generators {
            assert!(Ring::same(g.ring(), ring), "ideal generator over a different ring");
        }
        Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            order: MonomialOrder::GrevLex,
            cache: OnceLock::new(),
        }
    }

    pub fn zero(ring: &RingRef) -> Self {
        Ideal::new(ring, Vec::new())
    }

    /// Use `order` as the working order for membership and normal forms.
    pub fn with_order(mut self, order: MonomialOrder) -> Self {
        if order != self.order {
            self.order = order;
            self.cache = OnceLock::new();
        }
        self
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Basis in the working order, computed once.
    pub fn basis(&self) -> Result<Arc<GroebnerBasis>> {
        if let Some(b) = self.cache.get() {
            return Ok(b.clone());
        }
        let b = Arc::new(GroebnerBasis::build(&self.ring, &self.generators, &self.order)?);
        let _ = self.cache.set(b);
        Ok(self.cache.get().expect("cache set").clone())
    }

    pub fn basis_in(&self, order: &MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        if *order == self.order {
            self.basis()
        } else {
            Ok(Arc::new(GroebnerBasis::build(&self.ring, &self.generators, order)?))
        }
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        Ok(self.basis()?.reduce(f))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.basis()?.is_unit())
    }

    /// Reduced grevlex basis; the canonical generating set.
    pub fn reduced_generators(&self) -> Result<Vec<Polynomial>> {
        Ok(self.basis_in(&MonomialOrder::GrevLex)?.polynomials().to_vec())
    }

    /// `self + <extra>`, keeping the working order.
    pub fn extend(&self, extra: impl IntoIterator<Item = Polynomial>) -> Ideal {
        let mut gens = self.generators.clone();
        gens.extend(extra);
        Ideal::new(&self.ring, gens).with_order(self.order.clone())
    }

    /// Same ideal, as sets.
    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        if !Ring::same(&self.ring, &other.ring) {
            return Ok(false);
        }
        if self.generators == other.generators {
            return Ok(true);
        }
        Ok(self.reduced_generators()? == other.reduced_generators()?)
    }

    /// Standard monomials of total degree exactly `d` in the working order.
    pub fn standard_monomials(&self, d: u32) -> Result<Vec<Monomial>> {
        let gb = self.basis()?;
        let mut out = Vec::new();
        let n = self.ring.len();
        let mut e = vec![0u32; n];
        enumerate(&mut e, 0, d, &mut |m: &[u32]| {
            let m = Monomial(m.to_vec());
            if gb.is_standard(&m) {
                out.push(m);
            }
        });
        out.sort_by(|a, b| MonomialOrder::GrevLex.cmp(a, b));
        Ok(out)
    }
}

fn enumerate(e: &mut Vec<u32>, i: usize, left: u32, f: &mut dyn FnMut(&[u32])) {
    let n = e.len();
    if n == 0 {
        if left == 0 {
            f(e);
        }
        return;
    }
    if i == n - 1 {
        e[i] = left;
        f(e);
        e[i] = 0;
        return;
    }
    for k in (0..=left).rev() {
        e[i] = k;
        enumerate(e, i + 1, left - k, f);
    }
    e[i] = 0;
}
