//! Poisson brackets on presented algebras, given by the antisymmetric matrix
//! of brackets of generators and extended as a biderivation.

use std::sync::Arc;

use crate::algebra::{AlgebraMorphism, PresentedAlgebra, Tensor};
use crate::arith::{Polynomial, Ring};
use crate::check::Witness;
use crate::error::{Error, Result};
use crate::groebner::Ideal;

#[derive(Clone, Debug)]
pub struct PoissonStructure {
    algebra: PresentedAlgebra,
    matrix: Arc<Vec<Vec<Polynomial>>>,
}

impl PoissonStructure {
    /// Validates antisymmetry and that the relations generate a Poisson ideal.
    /// The Jacobi identity is not enforced; see [`check_jacobi`].
    pub fn new(algebra: &PresentedAlgebra, matrix: Vec<Vec<Polynomial>>) -> Result<Self> {
        let p = Self::unchecked(algebra, matrix)?;
        let n = algebra.ring().len();
        for i in 0..n {
            for j in 0..n {
                let s = p.entry(i, j).try_add(p.entry(j, i))?;
                if !s.is_zero() {
                    return Err(Error::Invalid(format!(
                        "bracket matrix not antisymmetric at ({}, {})",
                        algebra.ring().name(i),
                        algebra.ring().name(j)
                    )));
                }
            }
        }
        if let Some(w) = p.relation_witness()? {
            return Err(Error::Invalid(format!("relations are not a Poisson ideal: {w}")));
        }
        Ok(p)
    }

    /// Matrix taken as given. Used for derived structures whose validity
    /// follows from their inputs, and for deliberately broken fixtures.
    pub fn unchecked(algebra: &PresentedAlgebra, matrix: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = algebra.ring().len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("bracket matrix must be {n}x{n}")));
        }
        for row in &matrix {
            for e in row {
                Ring::check_same(e.ring(), algebra.ring())?;
            }
        }
        Ok(PoissonStructure {
            algebra: algebra.clone(),
            matrix: Arc::new(matrix),
        })
    }

    pub fn zero(algebra: &PresentedAlgebra) -> Self {
        let n = algebra.ring().len();
        let z = algebra.zero();
        PoissonStructure {
            algebra: algebra.clone(),
            matrix: Arc::new(vec![vec![z; n]; n]),
        }
    }

    /// Brackets `{a, b} = value` as text; unlisted pairs are zero.
    pub fn from_brackets(algebra: &PresentedAlgebra, brackets: &[(&str, &str, &str)]) -> Result<Self> {
        let entries = brackets
            .iter()
            .map(|(a, b, v)| Ok((a.to_string(), b.to_string(), algebra.element(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(algebra, &entries)
    }

    pub fn from_entries(algebra: &PresentedAlgebra, entries: &[(String, String, Polynomial)]) -> Result<Self> {
        let n = algebra.ring().len();
        let mut m = vec![vec![algebra.zero(); n]; n];
        for (a, b, v) in entries {
            let i = algebra.ring().require(a)?;
            let j = algebra.ring().require(b)?;
            if i == j {
                if !v.is_zero() {
                    return Err(Error::Invalid(format!("{{{a}, {a}}} must be zero")));
                }
                continue;
            }
            m[i][j] = v.clone();
            m[j][i] = -v;
        }
        Self::new(algebra, m)
    }

    pub fn algebra(&self) -> &PresentedAlgebra {
        &self.algebra
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Polynomial>] {
        &self.matrix
    }

    /// Nonzero upper-triangular entries `(i, j, {x_i, x_j})`.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, &Polynomial)> {
        let n = self.matrix.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.matrix[i][j].is_zero() {
                    out.push((i, j, &self.matrix[i][j]));
                }
            }
        }
        out
    }

    /// Replace one entry (and its transpose) without validation.
    pub fn with_entry_unchecked(&self, i: usize, j: usize, value: Polynomial) -> Self {
        let mut m = (*self.matrix).clone();
        m[j][i] = -&value;
        m[i][j] = value;
        PoissonStructure {
            algebra: self.algebra.clone(),
            matrix: Arc::new(m),
        }
    }

    /// Same structure over an algebra with the same variables but more relations.
    pub fn over(&self, algebra: &PresentedAlgebra) -> Result<Self> {
        let m = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|e| e.embed(algebra.ring())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::unchecked(algebra, m)
    }

    /// `sum_{i,j} e_ij d_i f d_j g`, not reduced.
    pub fn bracket_raw(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let ring = self.algebra.ring();
        Ring::check_same(f.ring(), ring)?;
        Ring::check_same(g.ring(), ring)?;
        let fs = f.support();
        let gs = g.support();
        let mut acc = Polynomial::zero(ring);
        if fs.is_empty() || gs.is_empty() {
            return Ok(acc);
        }
        let dg: Vec<(usize, Polynomial)> = gs.iter().map(|&j| (j, g.derivative(j))).collect();
        for &i in &fs {
            let mut inner = Polynomial::zero(ring);
            for (j, dgj) in &dg {
                let e = &self.matrix[i][*j];
                if !e.is_zero() {
                    inner = &inner + &(e * dgj);
                }
            }
            if !inner.is_zero() {
                acc = &acc + &(&f.derivative(i) * &inner);
            }
        }
        Ok(acc)
    }

    /// `{f, g}` reduced modulo the relations.
    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        self.algebra.normal_form(&self.bracket_raw(f, g)?)
    }

    /// The opposite structure `-P`.
    pub fn negate(&self) -> Self {
        let m = self.matrix.iter().map(|r| r.iter().map(|e| -e).collect()).collect();
        PoissonStructure {
            algebra: self.algebra.clone(),
            matrix: Arc::new(m),
        }
    }

    fn relation_witness(&self) -> Result<Option<Witness>> {
        let rels = self.algebra.relations().generators();
        for r in rels {
            for i in 0..self.algebra.ring().len() {
                let x = Polynomial::var(self.algebra.ring(), i);
                let b = self.bracket(&x, r)?;
                if !b.is_zero() {
                    return Ok(Some(Witness::new(
                        format!("{{{}, {r}}}", self.algebra.ring().name(i)),
                        b,
                    )));
                }
            }
        }
        Ok(None)
    }
}

/// Cyclic sums `{x_i,{x_j,x_k}} + {x_j,{x_k,x_i}} + {x_k,{x_i,x_j}}` over
/// generator triples; the first nonzero one.
pub fn jacobi_witness(p: &PoissonStructure) -> Result<Option<Witness>> {
    let ring = p.algebra.ring().clone();
    let n = ring.len();
    let x: Vec<Polynomial> = p.algebra.vars();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = p.bracket_raw(&x[i], p.entry(j, k))?;
                let b = p.bracket_raw(&x[j], p.entry(k, i))?;
                let c = p.bracket_raw(&x[k], p.entry(i, j))?;
                let s = p.algebra.normal_form(&(&(&a + &b) + &c))?;
                if !s.is_zero() {
                    return Ok(Some(Witness::new(
                        format!("({}, {}, {})", ring.name(i), ring.name(j), ring.name(k)),
                        s,
                    )));
                }
            }
        }
    }
    Ok(None)
}

pub fn check_jacobi(p: &PoissonStructure) -> Result<bool> {
    Ok(jacobi_witness(p)?.is_none())
}

/// First pair of generators of `ideal` whose bracket is not in `ideal + relations`.
pub fn coisotropy_witness(p: &PoissonStructure, ideal: &Ideal) -> Result<Option<Witness>> {
    Ring::check_same(ideal.ring(), p.algebra.ring())?;
    let full = p
        .algebra
        .relations()
        .extend(ideal.generators().iter().cloned())
        .with_order(ideal.order().clone());
    let gens = ideal.generators();
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            let br = p.bracket_raw(&gens[a], &gens[b])?;
            let nf = full.normal_form(&br)?;
            if !nf.is_zero() {
                return Ok(Some(Witness::new(format!("{{{}, {}}}", gens[a], gens[b]), nf)));
            }
        }
    }
    Ok(None)
}

/// `{I, I} ⊆ I` modulo the relations, checked on generator pairs.
pub fn check_coisotropic(p: &PoissonStructure, ideal: &Ideal) -> Result<bool> {
    Ok(coisotropy_witness(p, ideal)?.is_none())
}

/// `phi{x_i, x_j} = sign * {phi x_i, phi x_j}` on source generators.
pub fn poisson_morphism_witness(
    source: &PoissonStructure,
    target: &PoissonStructure,
    phi: &AlgebraMorphism,
    sign: i32,
) -> Result<Option<Witness>> {
    if sign != 1 && sign != -1 {
        return Err(Error::Invalid("sign must be +1 or -1".into()));
    }
    Ring::check_same(phi.source().ring(), source.algebra.ring())?;
    Ring::check_same(phi.target().ring(), target.algebra.ring())?;
    let n = source.algebra.ring().len();
    let imgs = phi.images();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = phi.apply_raw(source.entry(i, j))?;
            let mut rhs = target.bracket_raw(&imgs[i], &imgs[j])?;
            if sign < 0 {
                rhs = -&rhs;
            }
            let d = target.algebra.normal_form(&lhs.try_sub(&rhs)?)?;
            if !d.is_zero() {
                let r = source.algebra.ring();
                return Ok(Some(Witness::new(format!("({}, {})", r.name(i), r.name(j)), d)));
            }
        }
    }
    Ok(None)
}

pub fn check_poisson_morphism(
    source: &PoissonStructure,
    target: &PoissonStructure,
    phi: &AlgebraMorphism,
    sign: i32,
) -> Result<bool> {
    Ok(poisson_morphism_witness(source, target, phi, sign)?.is_none())
}

/// Block-diagonal structure on a tensor product, one block per factor.
pub fn tensor_structure(tensor: &Tensor, blocks: &[&PoissonStructure]) -> Result<PoissonStructure> {
    if blocks.len() != tensor.factors.len() {
        return Err(Error::Invalid("one Poisson structure per tensor factor".into()));
    }
    let n = tensor.ring().len();
    let mut m = vec![vec![Polynomial::zero(tensor.ring()); n]; n];
    let mut offset = 0;
    for (k, p) in blocks.iter().enumerate() {
        Ring::check_same(p.algebra.ring(), tensor.factors[k].ring())?;
        let size = p.algebra.ring().len();
        for i in 0..size {
            for j in 0..size {
                if !p.entry(i, j).is_zero() {
                    m[offset + i][offset + j] = tensor.embed(k, p.entry(i, j))?;
                }
            }
        }
        offset += size;
    }
    PoissonStructure::unchecked(&tensor.algebra, m)
}

/// `P_A ⊕ P_B` on `A ⊗ B`.
pub fn product_structure(a: &PoissonStructure, b: &PoissonStructure) -> Result<(Tensor, PoissonStructure)> {
    let t = crate::algebra::product_algebra(&a.algebra, &b.algebra)?;
    let p = tensor_structure(&t, &[a, b])?;
    Ok((t, p))
}

/// `X⁻ × X` with the ideal of the diagonal, `<L_x - R_x>`.
pub fn diagonal(p: &PoissonStructure) -> Result<(PoissonStructure, Ideal)> {
    let (t, pp) = product_structure(&p.negate(), p)?;
    let gens = p
        .algebra
        .vars()
        .iter()
        .map(|v| t.embed(0, v)?.try_sub(&t.embed(1, v)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((pp, Ideal::new(t.ring(), gens)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly;

    fn canonical() -> PoissonStructure {
        let a = PresentedAlgebra::parse("X", &["q", "p"], &[]).unwrap();
        PoissonStructure::from_brackets(&a, &[("q", "p", "1")]).unwrap()
    }

    #[test]
    fn brackets_in_canonical_plane() {
        let p = canonical();
        let r = p.algebra().ring().clone();
        assert_eq!(p.bracket(&poly(&r, "q^2"), &poly(&r, "p")).unwrap(), poly(&r, "2*q"));
        let f = poly(&r, "q^3*p + q");
        assert!(p.bracket(&f, &poly(&r, "1")).unwrap().is_zero());
        assert!(p.bracket(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn jacobi_examples() {
        assert!(check_jacobi(&canonical()).unwrap());
        let a = PresentedAlgebra::parse("sl2", &["a", "b", "c"], &[]).unwrap();
        let sl2 = PoissonStructure::from_brackets(&a, &[("a", "b", "-b"), ("a", "c", "c"), ("b", "c", "2*a")]).unwrap();
        assert!(check_jacobi(&sl2).unwrap());
    }

    #[test]
    fn coisotropy_examples() {
        let p = canonical();
        let r = p.algebra().ring().clone();
        assert!(check_coisotropic(&p, &Ideal::new(&r, vec![poly(&r, "p")])).unwrap());
        let w = coisotropy_witness(&p, &Ideal::new(&r, vec![poly(&r, "q"), poly(&r, "p")])).unwrap();
        assert_eq!(w.unwrap().residue, "1");
    }

    #[test]
    fn non_poisson_relation_rejected() {
        let a = PresentedAlgebra::parse("X", &["q", "p"], &["q"]).unwrap();
        assert!(PoissonStructure::from_brackets(&a, &[("q", "p", "1")]).is_err());
    }

    #[test]
    fn diagonal_is_coisotropic_and_projection_anti() {
        let p = canonical();
        let (pp, diag) = diagonal(&p).unwrap();
        assert!(check_coisotropic(&pp, &diag).unwrap());
        let proj = AlgebraMorphism::parse(
            p.algebra(),
            pp.algebra(),
            &[("q", "L_q"), ("p", "L_p")],
        )
        .unwrap();
        assert!(!check_poisson_morphism(&p, &pp, &proj, 1).unwrap());
        assert!(check_poisson_morphism(&p, &pp, &proj, -1).unwrap());
    }
}
