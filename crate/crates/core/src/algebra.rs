//! Finitely presented commutative algebras `k[x]/I`, morphisms between them,
//! tensor products and fibered coproducts.

use std::fmt;
use std::sync::Arc;

use crate::arith::{Polynomial, Ring, RingRef};
use crate::check::Witness;
use crate::error::{Error, Result};
use crate::groebner::Ideal;

struct AlgebraInner {
    label: String,
    relations: Ideal,
}

/// `k[variables] / relations`. Cheap to clone.
#[derive(Clone)]
pub struct PresentedAlgebra(Arc<AlgebraInner>);

impl PresentedAlgebra {
    pub fn new(label: impl Into<String>, ring: &RingRef, relations: Vec<Polynomial>) -> Self {
        Self::from_ideal(label, Ideal::new(ring, relations))
    }

    pub fn from_ideal(label: impl Into<String>, relations: Ideal) -> Self {
        PresentedAlgebra(Arc::new(AlgebraInner {
            label: label.into(),
            relations,
        }))
    }

    pub fn polynomial_ring<I, S>(label: impl Into<String>, names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ring = Ring::new(names)?;
        Ok(Self::new(label, &ring, Vec::new()))
    }

    /// Variables and relations given as text.
    pub fn parse(label: impl Into<String>, vars: &[&str], relations: &[&str]) -> Result<Self> {
        let ring = Ring::new(vars.iter().copied())?;
        let rels = relations
            .iter()
            .map(|r| Polynomial::parse(&ring, r))
            .collect::<Result<_>>()?;
        Ok(Self::new(label, &ring, rels))
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn relabel(&self, label: impl Into<String>) -> Self {
        Self::from_ideal(label, self.0.relations.clone())
    }

    pub fn ring(&self) -> &RingRef {
        self.0.relations.ring()
    }

    pub fn relations(&self) -> &Ideal {
        &self.0.relations
    }

    pub fn var(&self, name: &str) -> Result<Polynomial> {
        Polynomial::var_named(self.ring(), name)
    }

    pub fn vars(&self) -> Vec<Polynomial> {
        (0..self.ring().len())
            .map(|i| Polynomial::var(self.ring(), i))
            .collect()
    }

    pub fn element(&self, text: &str) -> Result<Polynomial> {
        Polynomial::parse(self.ring(), text)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.ring())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.ring())
    }

    /// Canonical representative of the class of `f`.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        Ring::check_same(f.ring(), self.ring())?;
        self.0.relations.normal_form(f)
    }

    pub fn is_zero(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn equal(&self, f: &Polynomial, g: &Polynomial) -> Result<bool> {
        self.is_zero(&f.try_sub(g)?)
    }

    /// Same variables and the same ideal.
    pub fn same_presentation(&self, other: &PresentedAlgebra) -> Result<bool> {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ok(true);
        }
        self.0.relations.same_ideal(&other.0.relations)
    }

    /// Add relations.
    pub fn quotient_by(&self, label: impl Into<String>, extra: &[Polynomial]) -> Result<Self> {
        for e in extra {
            Ring::check_same(e.ring(), self.ring())?;
        }
        let rels = self.0.relations.generators().iter().chain(extra).cloned().collect();
        Ok(Self::new(label, self.ring(), rels))
    }

    /// Krull dimension, read off the grevlex initial ideal: the largest set of
    /// variables containing the support of no leading monomial.
    pub fn krull_dimension(&self) -> Result<usize> {
        let gb = self.0.relations.basis()?;
        if gb.is_unit() {
            return Ok(0);
        }
        let supports: Vec<Vec<usize>> = gb.leading_monomials().map(|m| m.support().collect()).collect();
        let n = self.ring().len();
        let mut chosen = vec![false; n];
        Ok(max_independent(&supports, &mut chosen, 0, 0))
    }
}

fn max_independent(supports: &[Vec<usize>], chosen: &mut Vec<bool>, i: usize, size: usize) -> usize {
    if i == chosen.len() {
        return size;
    }
    chosen[i] = true;
    let ok = !supports
        .iter()
        .any(|s| s.contains(&i) && s.iter().all(|&j| j <= i && chosen[j]));
    let with = if ok {
        max_independent(supports, chosen, i + 1, size + 1)
    } else {
        0
    };
    chosen[i] = false;
    if with == size + (chosen.len() - i) {
        return with;
    }
    with.max(max_independent(supports, chosen, i + 1, size))
}

impl fmt::Display for PresentedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring())?;
        let gens = self.0.relations.generators();
        if !gens.is_empty() {
            let g: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
            write!(f, "/<{}>", g.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PresentedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label(), self)
    }
}

/// Algebra map given by images of the source variables. Geometrically the
/// pullback along a map of schemes in the opposite direction.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: PresentedAlgebra,
    target: PresentedAlgebra,
    images: Vec<Polynomial>,
}

impl AlgebraMorphism {
    pub fn new(source: &PresentedAlgebra, target: &PresentedAlgebra, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != source.ring().len() {
            let missing = source
                .ring()
                .names()
                .get(images.len())
                .cloned()
                .unwrap_or_else(|| "<extra image>".into());
            return Err(Error::MissingImage(missing));
        }
        for img in &images {
            Ring::check_same(img.ring(), target.ring())?;
        }
        Ok(AlgebraMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Images given as `(source variable, polynomial text over the target)`.
    pub fn parse(source: &PresentedAlgebra, target: &PresentedAlgebra, images: &[(&str, &str)]) -> Result<Self> {
        let mut list: Vec<Option<Polynomial>> = vec![None; source.ring().len()];
        for (v, text) in images {
            let i = source.ring().require(v)?;
            list[i] = Some(target.element(text)?);
        }
        let imgs = list
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::MissingImage(source.ring().name(i).to_string())))
            .collect::<Result<_>>()?;
        Self::new(source, target, imgs)
    }

    /// Variables sent to the same-named variables of the target.
    pub fn by_name(source: &PresentedAlgebra, target: &PresentedAlgebra) -> Result<Self> {
        let imgs = source
            .ring()
            .names()
            .iter()
            .map(|n| target.var(n))
            .collect::<Result<_>>()?;
        Self::new(source, target, imgs)
    }

    pub fn identity(a: &PresentedAlgebra) -> Self {
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            images: a.vars(),
        }
    }

    pub fn source(&self) -> &PresentedAlgebra {
        &self.source
    }

    pub fn target(&self) -> &PresentedAlgebra {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image_of(&self, var: &str) -> Result<&Polynomial> {
        Ok(&self.images[self.source.ring().require(var)?])
    }

    /// Image of `f`, reduced modulo the target relations.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        let raw = f.substitute(&self.images, self.target.ring())?;
        self.target.normal_form(&raw)
    }

    /// Image of `f` without reduction.
    pub fn apply_raw(&self, f: &Polynomial) -> Result<Polynomial> {
        f.substitute(&self.images, self.target.ring())
    }

    /// Same images with a different (same-variable) target presentation.
    pub fn retarget(&self, target: &PresentedAlgebra) -> Result<Self> {
        let imgs = self
            .images
            .iter()
            .map(|p| p.embed(target.ring()))
            .collect::<Result<_>>()?;
        Self::new(&self.source, target, imgs)
    }

    /// Same images viewed from a different (same-variable) source presentation.
    pub fn resource(&self, source: &PresentedAlgebra) -> Result<Self> {
        Ring::check_same(source.ring(), self.source.ring())?;
        Self::new(source, &self.target, self.images.clone())
    }
}

/// `None` if every source relation maps into the target relations; otherwise
/// the first relation that does not, with its residue.
pub fn morphism_witness(phi: &AlgebraMorphism) -> Result<Option<Witness>> {
    for r in phi.source.relations().generators() {
        let img = phi.apply(r)?;
        if !img.is_zero() {
            return Ok(Some(Witness::new(format!("relation {r}"), img)));
        }
    }
    Ok(None)
}

/// The images respect the source relations.
pub fn check_morphism(phi: &AlgebraMorphism) -> Result<bool> {
    Ok(morphism_witness(phi)?.is_none())
}

/// `psi ∘ phi`. Requires `phi.target` and `psi.source` to be the same presentation.
pub fn compose(phi: &AlgebraMorphism, psi: &AlgebraMorphism) -> Result<AlgebraMorphism> {
    if !phi.target.same_presentation(&psi.source)? {
        return Err(Error::NotComposable(format!(
            "{} is not {}",
            phi.target.label(),
            psi.source.label()
        )));
    }
    let imgs = phi
        .images
        .iter()
        .map(|p| psi.apply(&p.embed(psi.source.ring())?))
        .collect::<Result<_>>()?;
    AlgebraMorphism::new(&phi.source, &psi.target, imgs)
}

/// First source variable on which `f` and `g` differ in the common target.
pub fn morphisms_differ(f: &AlgebraMorphism, g: &AlgebraMorphism) -> Result<Option<Witness>> {
    Ring::check_same(f.source.ring(), g.source.ring())?;
    Ring::check_same(f.target.ring(), g.target.ring())?;
    for (i, (a, b)) in f.images.iter().zip(&g.images).enumerate() {
        let d = f.target.normal_form(&a.try_sub(b)?)?;
        if !d.is_zero() {
            return Ok(Some(Witness::new(f.source.ring().name(i), d)));
        }
    }
    Ok(None)
}

/// Tensor product of several algebras with prefixed variable names.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub algebra: PresentedAlgebra,
    pub factors: Vec<PresentedAlgebra>,
    pub prefixes: Vec<String>,
}

impl Tensor {
    pub fn new(label: impl Into<String>, factors: &[(&str, &PresentedAlgebra)]) -> Result<Self> {
        let mut names = Vec::new();
        for (p, a) in factors {
            names.extend(a.ring().names().iter().map(|n| format!("{p}{n}")));
        }
        let ring = Ring::new(names)?;
        let mut rels = Vec::new();
        for (p, a) in factors {
            for r in a.relations().generators() {
                rels.push(r.rename_into(&ring, |n| format!("{p}{n}"))?);
            }
        }
        Ok(Tensor {
            algebra: PresentedAlgebra::new(label, &ring, rels),
            factors: factors.iter().map(|(_, a)| (*a).clone()).collect(),
            prefixes: factors.iter().map(|(p, _)| p.to_string()).collect(),
        })
    }

    pub fn ring(&self) -> &RingRef {
        self.algebra.ring()
    }

    /// Move an element of factor `k` into the tensor ring.
    pub fn embed(&self, k: usize, f: &Polynomial) -> Result<Polynomial> {
        Ring::check_same(f.ring(), self.factors[k].ring())?;
        let p = &self.prefixes[k];
        f.rename_into(self.ring(), |n| format!("{p}{n}"))
    }

    /// Inclusion of factor `k` into `target`, which must share the tensor's variables.
    pub fn inclusion_into(&self, k: usize, target: &PresentedAlgebra) -> Result<AlgebraMorphism> {
        let imgs = self.factors[k]
            .vars()
            .iter()
            .map(|v| self.embed(k, v)?.embed(target.ring()))
            .collect::<Result<_>>()?;
        AlgebraMorphism::new(&self.factors[k], target, imgs)
    }

    /// Variable names of factor `k` inside the tensor.
    pub fn block_names(&self, k: usize) -> Vec<String> {
        let p = &self.prefixes[k];
        self.factors[k].ring().names().iter().map(|n| format!("{p}{n}")).collect()
    }

    /// The tensor modulo extra gluing relations.
    pub fn glue(&self, label: impl Into<String>, glue: Vec<Polynomial>) -> Result<PresentedAlgebra> {
        self.algebra.quotient_by(label, &glue)
    }
}

/// `A ⊗_C B` along `left: C -> A` and `right: C -> B`, with variables
/// `L_*` from `A` and `R_*` from `B`.
#[derive(Clone, Debug)]
pub struct FiberedCoproduct {
    pub algebra: PresentedAlgebra,
    pub tensor: Tensor,
    pub glue: Vec<Polynomial>,
    pub base: PresentedAlgebra,
    pub left_leg: AlgebraMorphism,
    pub right_leg: AlgebraMorphism,
}

pub const LEFT: &str = "L_";
pub const RIGHT: &str = "R_";

impl FiberedCoproduct {
    pub fn left_algebra(&self) -> &PresentedAlgebra {
        &self.tensor.factors[0]
    }

    pub fn right_algebra(&self) -> &PresentedAlgebra {
        &self.tensor.factors[1]
    }

    pub fn ring(&self) -> &RingRef {
        self.algebra.ring()
    }

    /// `f ⊗ 1`.
    pub fn left(&self, f: &Polynomial) -> Result<Polynomial> {
        self.tensor.embed(0, f)
    }

    /// `1 ⊗ f`.
    pub fn right(&self, f: &Polynomial) -> Result<Polynomial> {
        self.tensor.embed(1, f)
    }

    pub fn left_inclusion(&self) -> Result<AlgebraMorphism> {
        self.tensor.inclusion_into(0, &self.algebra)
    }

    pub fn right_inclusion(&self) -> Result<AlgebraMorphism> {
        self.tensor.inclusion_into(1, &self.algebra)
    }

    /// The morphism out of the coproduct induced by `f: A -> D` and `g: B -> D`.
    pub fn mediate(&self, f: &AlgebraMorphism, g: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        Ring::check_same(f.source.ring(), self.left_algebra().ring())?;
        Ring::check_same(g.source.ring(), self.right_algebra().ring())?;
        Ring::check_same(f.target.ring(), g.target.ring())?;
        let imgs = f.images.iter().chain(&g.images).cloned().collect();
        AlgebraMorphism::new(&self.algebra, &f.target, imgs)
    }
}

/// Pushout of `left: C -> A` and `right: C -> B`.
pub fn fibered_coproduct(
    a: &PresentedAlgebra,
    b: &PresentedAlgebra,
    base: &PresentedAlgebra,
    left: &AlgebraMorphism,
    right: &AlgebraMorphism,
) -> Result<FiberedCoproduct> {
    Ring::check_same(left.source.ring(), base.ring())?;
    Ring::check_same(right.source.ring(), base.ring())?;
    Ring::check_same(left.target.ring(), a.ring())?;
    Ring::check_same(right.target.ring(), b.ring())?;
    let tensor = Tensor::new(
        format!("{} *_{} {}", a.label(), base.label(), b.label()),
        &[(LEFT, a), (RIGHT, b)],
    )?;
    let mut glue = Vec::new();
    for (l, r) in left.images.iter().zip(&right.images) {
        let d = tensor.embed(0, l)?.try_sub(&tensor.embed(1, r)?)?;
        if !d.is_zero() {
            glue.push(d);
        }
    }
    let algebra = tensor.glue(tensor.algebra.label().to_string(), glue.clone())?;
    Ok(FiberedCoproduct {
        algebra,
        tensor,
        glue,
        base: base.clone(),
        left_leg: left.clone(),
        right_leg: right.clone(),
    })
}

/// `A ⊗ B` with `L_`/`R_` prefixes.
pub fn product_algebra(a: &PresentedAlgebra, b: &PresentedAlgebra) -> Result<Tensor> {
    Tensor::new(format!("{} * {}", a.label(), b.label()), &[(LEFT, a), (RIGHT, b)])
}

/// `A/J` with its projection.
pub fn quotient(a: &PresentedAlgebra, j: &[Polynomial]) -> Result<(PresentedAlgebra, AlgebraMorphism)> {
    let q = a.quotient_by(format!("{}/J", a.label()), j)?;
    let proj = AlgebraMorphism::new(a, &q, a.vars())?;
    Ok((q, proj))
}

/// `f` is invertible in `A`: `1 ∈ I + <f>`.
pub fn is_unit(a: &PresentedAlgebra, f: &Polynomial) -> Result<bool> {
    Ring::check_same(f.ring(), a.ring())?;
    a.relations().extend([f.clone()]).is_unit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly;

    #[test]
    fn morphism_well_definedness() {
        let a = PresentedAlgebra::parse("A", &["x"], &["x^2"]).unwrap();
        let b = PresentedAlgebra::parse("B", &["y"], &[]).unwrap();
        let c = PresentedAlgebra::parse("C", &["y"], &["y^2"]).unwrap();
        assert!(!check_morphism(&AlgebraMorphism::parse(&a, &b, &[("x", "y")]).unwrap()).unwrap());
        assert!(check_morphism(&AlgebraMorphism::parse(&a, &c, &[("x", "y")]).unwrap()).unwrap());
    }

    #[test]
    fn composition() {
        let a = PresentedAlgebra::parse("A", &["x"], &[]).unwrap();
        let b = PresentedAlgebra::parse("B", &["y"], &[]).unwrap();
        let c = PresentedAlgebra::parse("C", &["z"], &[]).unwrap();
        let f = AlgebraMorphism::parse(&a, &b, &[("x", "y^2")]).unwrap();
        let g = AlgebraMorphism::parse(&b, &c, &[("y", "z + 1")]).unwrap();
        let h = compose(&f, &g).unwrap();
        assert_eq!(h.images()[0], poly(c.ring(), "z^2 + 2*z + 1"));
        assert!(compose(&g, &f).is_err());
    }

    #[test]
    fn coproduct_over_moment() {
        let g = PresentedAlgebra::parse("G", &["t", "u", "z"], &["t*u - 1"]).unwrap();
        let x = PresentedAlgebra::parse("X", &["z"], &[]).unwrap();
        let m = PresentedAlgebra::parse("M", &["q1", "q2", "p1", "p2"], &[]).unwrap();
        let s = AlgebraMorphism::parse(&x, &g, &[("z", "z")]).unwrap();
        let mu = AlgebraMorphism::parse(&x, &m, &[("z", "q1*p1 - q2*p2")]).unwrap();
        let c = fibered_coproduct(&g, &m, &x, &s, &mu).unwrap();
        assert_eq!(c.ring().len(), 7);
        assert_eq!(c.glue.len(), 1);
        let lhs = c.algebra.element("L_z").unwrap();
        let rhs = c.algebra.element("R_q1*R_p1 - R_q2*R_p2").unwrap();
        assert!(c.algebra.equal(&lhs, &rhs).unwrap());
        assert!(c.algebra.is_zero(&c.algebra.element("L_t*L_u - 1").unwrap()).unwrap());
    }

    #[test]
    fn quotient_kills_exactly_j() {
        let a = PresentedAlgebra::parse("A", &["x", "y"], &[]).unwrap();
        let j = vec![a.element("x*y").unwrap()];
        let (q, p) = quotient(&a, &j).unwrap();
        assert!(q.is_zero(&p.apply(&a.element("x^2*y").unwrap()).unwrap()).unwrap());
        assert!(!q.is_zero(&p.apply(&a.element("x^2").unwrap()).unwrap()).unwrap());
    }

    #[test]
    fn dimension_from_initial_ideal() {
        let g = PresentedAlgebra::parse("G", &["t", "u", "z"], &["t*u - 1"]).unwrap();
        assert_eq!(g.krull_dimension().unwrap(), 2);
        let c = PresentedAlgebra::parse("C", &["x", "y", "z"], &["y - x^2", "z - x^3"]).unwrap();
        assert_eq!(c.krull_dimension().unwrap(), 1);
        let p = PresentedAlgebra::parse("P", &["x", "y"], &["x", "y"]).unwrap();
        assert_eq!(p.krull_dimension().unwrap(), 0);
    }
}
