//! Affine groupoid schemes, symplectic groupoids and subgroupoids, all given
//! by comorphisms between presented algebras.

use crate::algebra::{
    compose, fibered_coproduct, is_unit, morphism_witness, morphisms_differ, AlgebraMorphism,
    FiberedCoproduct, PresentedAlgebra, Tensor, LEFT, RIGHT,
};
use crate::arith::{MonomialOrder, Polynomial, Ring};
use crate::check::{CheckReport, Witness};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poisson::{coisotropy_witness, poisson_morphism_witness, tensor_structure, PoissonStructure};

/// A groupoid `G ⇉ X` through its coordinate rings.
///
/// `mult` lands in `composable = k[G] ⊗_{k[X]} k[G]`, glued along `src` on the
/// left factor and `tgt` on the right: a pair `(g, h)` with `s(g) = t(h)`.
#[derive(Clone, Debug)]
pub struct AffineGroupoid {
    pub label: String,
    pub base: PresentedAlgebra,
    pub total: PresentedAlgebra,
    pub src: AlgebraMorphism,
    pub tgt: AlgebraMorphism,
    pub unit: AlgebraMorphism,
    pub inv: AlgebraMorphism,
    pub mult: AlgebraMorphism,
    pub composable: FiberedCoproduct,
}

/// Text images for a user-described groupoid; `mult` images use `L_`/`R_` names.
pub struct GroupoidText<'a> {
    pub src: &'a [(&'a str, &'a str)],
    pub tgt: &'a [(&'a str, &'a str)],
    pub unit: &'a [(&'a str, &'a str)],
    pub inv: &'a [(&'a str, &'a str)],
    pub mult: &'a [(&'a str, &'a str)],
}

impl AffineGroupoid {
    /// `mult_images` are indexed by total variables and live over the
    /// composable ring.
    pub fn new(
        label: impl Into<String>,
        base: &PresentedAlgebra,
        total: &PresentedAlgebra,
        src: AlgebraMorphism,
        tgt: AlgebraMorphism,
        unit: AlgebraMorphism,
        inv: AlgebraMorphism,
        mult_images: Vec<Polynomial>,
    ) -> Result<Self> {
        for (name, m, s, t) in [
            ("src", &src, base, total),
            ("tgt", &tgt, base, total),
            ("unit", &unit, total, base),
            ("inv", &inv, total, total),
        ] {
            if !Ring::same(m.source().ring(), s.ring()) || !Ring::same(m.target().ring(), t.ring()) {
                return Err(Error::Invalid(format!("{name} has the wrong source or target")));
            }
        }
        let composable = fibered_coproduct(total, total, base, &src, &tgt)?;
        let mult = AlgebraMorphism::new(total, &composable.algebra, mult_images)?;
        Ok(AffineGroupoid {
            label: label.into(),
            base: base.clone(),
            total: total.clone(),
            src: src.resource(base)?.retarget(total)?,
            tgt: tgt.resource(base)?.retarget(total)?,
            unit: unit.resource(total)?.retarget(base)?,
            inv: inv.resource(total)?.retarget(total)?,
            mult,
            composable,
        })
    }

    pub fn parse(
        label: impl Into<String>,
        base: &PresentedAlgebra,
        total: &PresentedAlgebra,
        text: &GroupoidText<'_>,
    ) -> Result<Self> {
        let src = AlgebraMorphism::parse(base, total, text.src)?;
        let tgt = AlgebraMorphism::parse(base, total, text.tgt)?;
        let unit = AlgebraMorphism::parse(total, base, text.unit)?;
        let inv = AlgebraMorphism::parse(total, total, text.inv)?;
        let composable = fibered_coproduct(total, total, base, &src, &tgt)?;
        let mult = AlgebraMorphism::parse(total, &composable.algebra, text.mult)?;
        Self::new(label, base, total, src, tgt, unit, inv, mult.images().to_vec())
    }

    /// Same structure maps over quotients of base and total.
    pub fn restricted(&self, label: impl Into<String>, base: &PresentedAlgebra, total: &PresentedAlgebra) -> Result<Self> {
        let src = self.src.resource(base)?.retarget(total)?;
        let tgt = self.tgt.resource(base)?.retarget(total)?;
        let unit = self.unit.resource(total)?.retarget(base)?;
        let inv = self.inv.resource(total)?.retarget(total)?;
        let composable = fibered_coproduct(total, total, base, &src, &tgt)?;
        let mult_images = self
            .mult
            .images()
            .iter()
            .map(|p| p.embed(composable.ring()))
            .collect::<Result<_>>()?;
        Self::new(label, base, total, src, tgt, unit, inv, mult_images)
    }
}

/// Triple `k[G] ⊗_X k[G] ⊗_X k[G]` with blocks `A_`, `B_`, `C_`: composable
/// triples `(a, b, c)` with `s(a) = t(b)`, `s(b) = t(c)`.
fn composable_triple(g: &AffineGroupoid) -> Result<(Tensor, PresentedAlgebra)> {
    let t = Tensor::new(
        format!("{} triple", g.label),
        &[("A_", &g.total), ("B_", &g.total), ("C_", &g.total)],
    )?;
    let mut glue = Vec::new();
    for (s, tt) in g.src.images().iter().zip(g.tgt.images()) {
        glue.push(t.embed(0, s)?.try_sub(&t.embed(1, tt)?)?);
        glue.push(t.embed(1, s)?.try_sub(&t.embed(2, tt)?)?);
    }
    let alg = t.glue(t.algebra.label().to_string(), glue)?;
    Ok((t, alg))
}

/// Morphism from the composable coproduct into `target`, renaming the
/// `L_`/`R_` blocks to `left`/`right` prefixes.
fn rename_composable(g: &AffineGroupoid, target: &PresentedAlgebra, left: &str, right: &str) -> Result<AlgebraMorphism> {
    let imgs = g
        .composable
        .ring()
        .names()
        .iter()
        .map(|n| {
            let new = if let Some(rest) = n.strip_prefix(LEFT) {
                format!("{left}{rest}")
            } else {
                format!("{right}{}", n.strip_prefix(RIGHT).expect("composable names are prefixed"))
            };
            target.var(&new)
        })
        .collect::<Result<_>>()?;
    AlgebraMorphism::new(&g.composable.algebra, target, imgs)
}

fn block_inclusion(t: &Tensor, k: usize, target: &PresentedAlgebra) -> Result<AlgebraMorphism> {
    t.inclusion_into(k, target)
}

/// All groupoid axioms as comorphism identities, each with a witness on failure.
pub fn check_groupoid_axioms(g: &AffineGroupoid) -> Result<CheckReport> {
    let mut r = CheckReport::new();
    for (name, m) in [
        ("src well-defined", &g.src),
        ("tgt well-defined", &g.tgt),
        ("unit well-defined", &g.unit),
        ("inv well-defined", &g.inv),
        ("mult well-defined", &g.mult),
    ] {
        r.record(name, morphism_witness(m)?);
    }

    let id_x = AlgebraMorphism::identity(&g.base);
    let id_g = AlgebraMorphism::identity(&g.total);
    r.record("s after unit is identity", morphisms_differ(&compose(&g.src, &g.unit)?, &id_x)?);
    r.record("t after unit is identity", morphisms_differ(&compose(&g.tgt, &g.unit)?, &id_x)?);

    let c = &g.composable;
    let l_inc = c.left_inclusion()?;
    let r_inc = c.right_inclusion()?;
    r.record(
        "source of a product",
        morphisms_differ(&compose(&g.src, &g.mult)?, &compose(&g.src, &r_inc)?)?,
    );
    r.record(
        "target of a product",
        morphisms_differ(&compose(&g.tgt, &g.mult)?, &compose(&g.tgt, &l_inc)?)?,
    );

    let t_unit = compose(&g.unit, &g.tgt)?;
    let s_unit = compose(&g.unit, &g.src)?;
    let left_unit = c.mediate(&t_unit, &id_g)?;
    let right_unit = c.mediate(&id_g, &s_unit)?;
    r.record("left unit law", morphisms_differ(&compose(&g.mult, &left_unit)?, &id_g)?);
    r.record("right unit law", morphisms_differ(&compose(&g.mult, &right_unit)?, &id_g)?);

    r.record("inverse swaps source and target", morphisms_differ(&compose(&g.src, &g.inv)?, &g.tgt)?);
    let with_inv = c.mediate(&id_g, &g.inv)?;
    let inv_with = c.mediate(&g.inv, &id_g)?;
    r.record("g * g^-1 = 1(t(g))", morphisms_differ(&compose(&g.mult, &with_inv)?, &t_unit)?);
    r.record("g^-1 * g = 1(s(g))", morphisms_differ(&compose(&g.mult, &inv_with)?, &s_unit)?);

    let (t3, triple) = composable_triple(g)?;
    let ab = rename_composable(g, &triple, "A_", "B_")?;
    let bc = rename_composable(g, &triple, "B_", "C_")?;
    let alpha = c.mediate(&compose(&g.mult, &ab)?, &block_inclusion(&t3, 2, &triple)?)?;
    let beta = c.mediate(&block_inclusion(&t3, 0, &triple)?, &compose(&g.mult, &bc)?)?;
    r.record(
        "associativity",
        morphisms_differ(&compose(&g.mult, &alpha)?, &compose(&g.mult, &beta)?)?,
    );
    Ok(r)
}

/// A groupoid with Poisson structures on total space and base.
#[derive(Clone, Debug)]
pub struct SymplecticGroupoid {
    pub groupoid: AffineGroupoid,
    pub total_poisson: PoissonStructure,
    pub base_poisson: PoissonStructure,
}

impl SymplecticGroupoid {
    /// `G⁻`: same groupoid, both structures negated.
    pub fn negated(&self) -> Self {
        let mut g = self.clone();
        g.groupoid.label = format!("{}^-", self.groupoid.label);
        g.total_poisson = self.total_poisson.negate();
        g.base_poisson = self.base_poisson.negate();
        g
    }

    pub fn label(&self) -> &str {
        &self.groupoid.label
    }
}

/// Ideal of the graph of multiplication in `G × G × G⁻`, with the product
/// block first. Returns the Poisson structure on the triple tensor and the ideal.
pub fn multiplication_graph(sg: &SymplecticGroupoid) -> Result<(PoissonStructure, Ideal)> {
    let g = &sg.groupoid;
    let t = Tensor::new(
        format!("{} graph", g.label),
        &[("C_", &g.total), ("A_", &g.total), ("B_", &g.total)],
    )?;
    let neg = sg.total_poisson.negate();
    let p = tensor_structure(&t, &[&neg, &sg.total_poisson, &sg.total_poisson])?;
    let mut gens = Vec::new();
    for (s, tt) in g.src.images().iter().zip(g.tgt.images()) {
        gens.push(t.embed(1, s)?.try_sub(&t.embed(2, tt)?)?);
    }
    let rename = |n: &str| {
        if let Some(rest) = n.strip_prefix(LEFT) {
            format!("A_{rest}")
        } else {
            format!("B_{}", &n[RIGHT.len()..])
        }
    };
    for (v, img) in g.total.vars().iter().zip(g.mult.images()) {
        let lift = g.composable.algebra.normal_form(img)?;
        gens.push(t.embed(0, v)?.try_sub(&lift.rename_into(t.ring(), rename)?)?);
    }
    let split = g.total.ring().len();
    Ok((p, Ideal::new(t.ring(), gens).with_order(MonomialOrder::elimination(split))))
}

fn pfaffian(m: &[Vec<Polynomial>], idx: &[usize], zero: &Polynomial) -> Polynomial {
    if idx.is_empty() {
        return Polynomial::one(zero.ring());
    }
    let first = idx[0];
    let mut acc = zero.clone();
    for k in 1..idx.len() {
        let e = &m[first][idx[k]];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&j| j != idx[k]).collect();
        let sub = pfaffian(m, &rest, zero);
        let term = e * &sub;
        acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Nondegeneracy certificate: a principal minor of the bracket matrix, of size
/// the Krull dimension, whose Pfaffian is a unit. Returns the variables of the
/// minor, or a witness.
pub fn nondegeneracy_certificate(p: &PoissonStructure) -> Result<std::result::Result<Vec<String>, Witness>> {
    let a = p.algebra();
    let d = a.krull_dimension()?;
    if d % 2 == 1 {
        return Ok(Err(Witness::new("dimension", format!("{d} is odd"))));
    }
    let zero = a.zero();
    for s in subsets(a.ring().len(), d) {
        let pf = pfaffian(p.matrix(), &s, &zero);
        if pf.is_zero() {
            continue;
        }
        if is_unit(a, &pf)? {
            return Ok(Ok(s.iter().map(|&i| a.ring().name(i).to_string()).collect()));
        }
    }
    Ok(Err(Witness::new(
        format!("principal minors of size {d}"),
        "no unit Pfaffian",
    )))
}

/// Symplectic groupoid conditions: graph of multiplication coisotropic in
/// `G × G × G⁻`, target Poisson, source anti-Poisson, bracket nondegenerate.
pub fn check_symplectic(sg: &SymplecticGroupoid) -> Result<CheckReport> {
    let g = &sg.groupoid;
    let mut r = CheckReport::new();
    if !Ring::same(sg.total_poisson.algebra().ring(), g.total.ring())
        || !Ring::same(sg.base_poisson.algebra().ring(), g.base.ring())
    {
        return Err(Error::Invalid("Poisson structures live on the wrong algebras".into()));
    }
    r.record("target is Poisson", poisson_morphism_witness(&sg.base_poisson, &sg.total_poisson, &g.tgt, 1)?);
    r.record("source is anti-Poisson", poisson_morphism_witness(&sg.base_poisson, &sg.total_poisson, &g.src, -1)?);
    let (p, ideal) = multiplication_graph(sg)?;
    r.record("graph of multiplication is coisotropic", coisotropy_witness(&p, &ideal)?);
    r.record("nondegenerate", nondegeneracy_certificate(&sg.total_poisson)?.err());
    Ok(r)
}

/// Pair groupoid `X × X⁻ ⇉ X`: `t` is the left factor, `s` the right one.
pub fn pair_groupoid(p: &PoissonStructure) -> Result<SymplecticGroupoid> {
    if let Err(w) = nondegeneracy_certificate(p)? {
        return Err(Error::Invalid(format!("pair groupoid needs a nondegenerate bracket: {w}")));
    }
    pair_groupoid_unchecked(p)
}

/// Pair groupoid without the nondegeneracy precondition.
pub fn pair_groupoid_unchecked(p: &PoissonStructure) -> Result<SymplecticGroupoid> {
    let x = p.algebra();
    let t = Tensor::new(format!("Pair({})", x.label()), &[(LEFT, x), (RIGHT, x)])?;
    let total = t.algebra.clone();
    let tgt = t.inclusion_into(0, &total)?;
    let src = t.inclusion_into(1, &total)?;
    let unit_imgs: Vec<Polynomial> = x.vars().into_iter().chain(x.vars()).collect();
    let unit = AlgebraMorphism::new(&total, x, unit_imgs)?;
    let n = x.ring().len();
    let inv_imgs: Vec<Polynomial> = (0..2 * n)
        .map(|i| Polynomial::var(total.ring(), (i + n) % (2 * n)))
        .collect();
    let inv = AlgebraMorphism::new(&total, &total, inv_imgs)?;
    let composable = fibered_coproduct(&total, &total, x, &src, &tgt)?;
    let mult_imgs = total
        .ring()
        .names()
        .iter()
        .map(|name| {
            // (a, b)(b, c) = (a, c): left coordinates from the left factor, right from the right.
            let prefix = if name.starts_with(LEFT) { LEFT } else { RIGHT };
            composable.algebra.var(&format!("{prefix}{name}"))
        })
        .collect::<Result<_>>()?;
    let g = AffineGroupoid::new(format!("Pair({})", x.label()), x, &total, src, tgt, unit, inv, mult_imgs)?;
    let neg = p.negate();
    let total_poisson = tensor_structure(&t, &[p, &neg])?;
    Ok(SymplecticGroupoid {
        groupoid: g,
        total_poisson,
        base_poisson: p.clone(),
    })
}

fn view(v: &[(String, String)]) -> Vec<(&str, &str)> {
    v.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()
}

fn torus_names(n: usize) -> Vec<[String; 3]> {
    if n == 1 {
        return vec![["t".into(), "u".into(), "z".into()]];
    }
    (1..=n)
        .map(|i| [format!("t{i}"), format!("u{i}"), format!("z{i}")])
        .collect()
}

/// `T*(G_m^n) ⇉ k^n`: `k[t_i, u_i, z_i]/<t_i u_i - 1>` with `{t_i, z_i} = t_i`,
/// `{u_i, z_i} = -u_i`, source = target = projection to `z`.
/// For `n = 1` the variables are `t, u, z`.
pub fn cotangent_groupoid_torus(n: usize) -> Result<SymplecticGroupoid> {
    let names = torus_names(n);
    let total_names: Vec<String> = names.iter().flat_map(|v| v.iter().cloned()).collect();
    let base_names: Vec<String> = names.iter().map(|v| v[2].clone()).collect();
    let tr = Ring::new(total_names)?;
    let rels = names
        .iter()
        .map(|[t, u, _]| Polynomial::parse(&tr, &format!("{t}*{u} - 1")))
        .collect::<Result<_>>()?;
    let label = format!("T*Gm^{n}");
    let total = PresentedAlgebra::new(label.clone(), &tr, rels);
    let base = PresentedAlgebra::polynomial_ring(format!("k^{n}"), base_names)?;

    let pairs = |f: &dyn Fn(&[String; 3]) -> Vec<(String, String)>| -> Vec<(String, String)> {
        names.iter().flat_map(f).collect()
    };
    let z_id = pairs(&|[_, _, z]| vec![(z.clone(), z.clone())]);
    let unit = pairs(&|[t, u, z]| vec![(t.clone(), "1".into()), (u.clone(), "1".into()), (z.clone(), z.clone())]);
    let inv = pairs(&|[t, u, z]| vec![(t.clone(), u.clone()), (u.clone(), t.clone()), (z.clone(), z.clone())]);
    let mult = pairs(&|[t, u, z]| {
        vec![
            (t.clone(), format!("L_{t}*R_{t}")),
            (u.clone(), format!("L_{u}*R_{u}")),
            (z.clone(), format!("L_{z}")),
        ]
    });
    let g = AffineGroupoid::parse(
        label,
        &base,
        &total,
        &GroupoidText {
            src: &view(&z_id),
            tgt: &view(&z_id),
            unit: &view(&unit),
            inv: &view(&inv),
            mult: &view(&mult),
        },
    )?;
    let brackets: Vec<(String, String, Polynomial)> = names
        .iter()
        .flat_map(|[t, u, z]| {
            vec![
                (t.clone(), z.clone(), Polynomial::var_named(&tr, t).unwrap()),
                (u.clone(), z.clone(), -&Polynomial::var_named(&tr, u).unwrap()),
            ]
        })
        .collect();
    let total_poisson = PoissonStructure::from_entries(&total, &brackets)?;
    Ok(SymplecticGroupoid {
        groupoid: g,
        total_poisson,
        base_poisson: PoissonStructure::zero(&base),
    })
}

/// The torus `G_m^n` as a groupoid over a point.
pub fn torus_group(n: usize) -> Result<AffineGroupoid> {
    let names: Vec<[String; 2]> = if n == 1 {
        vec![["t".into(), "u".into()]]
    } else {
        (1..=n).map(|i| [format!("t{i}"), format!("u{i}")]).collect()
    };
    let tr = Ring::new(names.iter().flat_map(|v| v.iter().cloned()))?;
    let rels = names
        .iter()
        .map(|[t, u]| Polynomial::parse(&tr, &format!("{t}*{u} - 1")))
        .collect::<Result<_>>()?;
    let total = PresentedAlgebra::new(format!("Gm^{n}"), &tr, rels);
    let base = PresentedAlgebra::polynomial_ring("pt", Vec::<String>::new())?;
    let unit: Vec<(String, String)> = names.iter().flat_map(|[t, u]| [(t.clone(), "1".into()), (u.clone(), "1".into())]).collect();
    let inv: Vec<(String, String)> = names.iter().flat_map(|[t, u]| [(t.clone(), u.clone()), (u.clone(), t.clone())]).collect();
    let mult: Vec<(String, String)> = names
        .iter()
        .flat_map(|[t, u]| [(t.clone(), format!("L_{t}*R_{t}")), (u.clone(), format!("L_{u}*R_{u}"))])
        .collect();
    AffineGroupoid::parse(
        format!("Gm^{n}"),
        &base,
        &total,
        &GroupoidText {
            src: &[],
            tgt: &[],
            unit: &view(&unit),
            inv: &view(&inv),
            mult: &view(&mult),
        },
    )
}

/// The trivial groupoid: a point over a point.
pub fn trivial_groupoid() -> Result<SymplecticGroupoid> {
    let pt = PresentedAlgebra::polynomial_ring("pt", Vec::<String>::new())?;
    let id = AlgebraMorphism::identity(&pt);
    let g = AffineGroupoid::new("1", &pt, &pt, id.clone(), id.clone(), id.clone(), id, Vec::new())?;
    Ok(SymplecticGroupoid {
        groupoid: g,
        total_poisson: PoissonStructure::zero(&pt),
        base_poisson: PoissonStructure::zero(&pt),
    })
}

/// Rename a composable-coproduct polynomial of a factor groupoid into the
/// composable coproduct of a product groupoid whose factor has prefix `p`.
fn lift_composable_name(n: &str, p: &str) -> String {
    if let Some(rest) = n.strip_prefix(LEFT) {
        format!("{LEFT}{p}{rest}")
    } else {
        format!("{RIGHT}{p}{}", &n[RIGHT.len()..])
    }
}

/// `G₁ × G₂ ⇉ X₁ × X₂`, factor variables prefixed `L_` and `R_`.
pub fn product_groupoid(a: &AffineGroupoid, b: &AffineGroupoid) -> Result<AffineGroupoid> {
    let label = format!("{} x {}", a.label, b.label);
    let tt = Tensor::new(label.clone(), &[(LEFT, &a.total), (RIGHT, &b.total)])?;
    let tb = Tensor::new(format!("{} x {}", a.base.label(), b.base.label()), &[(LEFT, &a.base), (RIGHT, &b.base)])?;
    let total = tt.algebra.clone();
    let base = tb.algebra.clone();
    let tensor_map = |fa: &AlgebraMorphism, fb: &AlgebraMorphism, src: &Tensor, dst: &Tensor, dst_alg: &PresentedAlgebra| {
        let mut imgs = Vec::new();
        for (k, f) in [fa, fb].into_iter().enumerate() {
            for img in f.images() {
                imgs.push(dst.embed(k, img)?.embed(dst_alg.ring())?);
            }
        }
        AlgebraMorphism::new(&src.algebra, dst_alg, imgs)
    };
    let src = tensor_map(&a.src, &b.src, &tb, &tt, &total)?;
    let tgt = tensor_map(&a.tgt, &b.tgt, &tb, &tt, &total)?;
    let unit = tensor_map(&a.unit, &b.unit, &tt, &tb, &base)?;
    let inv = tensor_map(&a.inv, &b.inv, &tt, &tt, &total)?;
    let composable = fibered_coproduct(&total, &total, &base, &src, &tgt)?;
    let mut mult = Vec::new();
    for (g, p) in [(a, LEFT), (b, RIGHT)] {
        for img in g.mult.images() {
            mult.push(img.rename_into(composable.ring(), |n| lift_composable_name(n, p))?);
        }
    }
    AffineGroupoid::new(label, &base, &total, src, tgt, unit, inv, mult)
}

pub fn product_symplectic(a: &SymplecticGroupoid, b: &SymplecticGroupoid) -> Result<SymplecticGroupoid> {
    let g = product_groupoid(&a.groupoid, &b.groupoid)?;
    let tt = Tensor::new("t", &[(LEFT, &a.groupoid.total), (RIGHT, &b.groupoid.total)])?;
    let tb = Tensor::new("b", &[(LEFT, &a.groupoid.base), (RIGHT, &b.groupoid.base)])?;
    let tp = tensor_structure(&tt, &[&a.total_poisson, &b.total_poisson])?.over(&g.total)?;
    let bp = tensor_structure(&tb, &[&a.base_poisson, &b.base_poisson])?.over(&g.base)?;
    Ok(SymplecticGroupoid {
        groupoid: g,
        total_poisson: tp,
        base_poisson: bp,
    })
}

/// `H ⇉ S` inside `G ⇉ X`, cut out by ideals of `k[G]` and `k[X]`.
#[derive(Clone, Debug)]
pub struct Subgroupoid {
    pub label: String,
    pub parent: AffineGroupoid,
    pub total_ideal: Ideal,
    pub base_ideal: Ideal,
    /// User assertion that `H` is a stabilizer of `S`; not verified.
    pub stabilizer: bool,
}

impl Subgroupoid {
    pub fn new(label: impl Into<String>, parent: &AffineGroupoid, total_ideal: Vec<Polynomial>, base_ideal: Vec<Polynomial>, stabilizer: bool) -> Result<Self> {
        for p in &total_ideal {
            Ring::check_same(p.ring(), parent.total.ring())?;
        }
        for p in &base_ideal {
            Ring::check_same(p.ring(), parent.base.ring())?;
        }
        Ok(Subgroupoid {
            label: label.into(),
            parent: parent.clone(),
            total_ideal: Ideal::new(parent.total.ring(), total_ideal),
            base_ideal: Ideal::new(parent.base.ring(), base_ideal),
            stabilizer,
        })
    }

    /// `k[S] = k[X]/I_S`.
    pub fn base_algebra(&self) -> Result<PresentedAlgebra> {
        self.parent
            .base
            .quotient_by(format!("{} base", self.label), self.base_ideal.generators())
    }

    /// `k[H] = k[G]/I_H`.
    pub fn total_algebra(&self) -> Result<PresentedAlgebra> {
        self.parent
            .total
            .quotient_by(self.label.clone(), self.total_ideal.generators())
    }

    /// `H ⇉ S` as a groupoid in its own right.
    pub fn as_groupoid(&self) -> Result<AffineGroupoid> {
        self.parent
            .restricted(self.label.clone(), &self.base_algebra()?, &self.total_algebra()?)
    }
}

fn descent_witness(map: &AlgebraMorphism, gens: &[Polynomial], target: &Ideal) -> Result<Option<Witness>> {
    for g in gens {
        let img = map.apply_raw(g)?;
        let nf = target.normal_form(&img)?;
        if !nf.is_zero() {
            return Ok(Some(Witness::new(g.to_string(), nf)));
        }
    }
    Ok(None)
}

/// Structure maps descend to `H ⇉ S`; with a symplectic parent, both ideals
/// are also checked to be coisotropic.
pub fn check_subgroupoid(h: &Subgroupoid, symplectic: Option<&SymplecticGroupoid>) -> Result<CheckReport> {
    let g = &h.parent;
    let mut r = CheckReport::new();
    let ih = g.total.relations().extend(h.total_ideal.generators().iter().cloned());
    let is = g.base.relations().extend(h.base_ideal.generators().iter().cloned());
    r.record("source descends", descent_witness(&g.src, h.base_ideal.generators(), &ih)?);
    r.record("target descends", descent_witness(&g.tgt, h.base_ideal.generators(), &ih)?);
    r.record("unit descends", descent_witness(&g.unit, h.total_ideal.generators(), &is)?);
    r.record("inverse descends", descent_witness(&g.inv, h.total_ideal.generators(), &ih)?);
    let c = &g.composable;
    let mut both = Vec::new();
    for p in h.total_ideal.generators() {
        both.push(c.left(p)?);
        both.push(c.right(p)?);
    }
    let ihh = c.algebra.relations().extend(both);
    r.record("multiplication descends", descent_witness(&g.mult, h.total_ideal.generators(), &ihh)?);
    if let Some(sg) = symplectic {
        r.record("total ideal coisotropic", coisotropy_witness(&sg.total_poisson, &h.total_ideal)?);
        r.record("base ideal coisotropic", coisotropy_witness(&sg.base_poisson, &h.base_ideal)?);
    }
    Ok(r)
}

/// The diagonal `ΔG` inside `G⁻ × G`, over `ΔX ⊂ X⁻ × X`.
/// Returns the ambient product groupoid and the subgroupoid.
pub fn diagonal_stabilizer(sg: &SymplecticGroupoid) -> Result<(SymplecticGroupoid, Subgroupoid)> {
    let prod = product_symplectic(&sg.negated(), sg)?;
    let g = &prod.groupoid;
    let diag = |alg: &PresentedAlgebra, names: &[String]| -> Result<Vec<Polynomial>> {
        names
            .iter()
            .map(|n| alg.var(&format!("{LEFT}{n}"))?.try_sub(&alg.var(&format!("{RIGHT}{n}"))?))
            .collect()
    };
    let ti = diag(&g.total, sg.groupoid.total.ring().names())?;
    let bi = diag(&g.base, sg.groupoid.base.ring().names())?;
    let h = Subgroupoid::new(format!("Diag({})", sg.label()), g, ti, bi, true)?;
    Ok((prod, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> PoissonStructure {
        let a = PresentedAlgebra::parse("X", &["q", "p"], &[]).unwrap();
        PoissonStructure::from_brackets(&a, &[("q", "p", "1")]).unwrap()
    }

    #[test]
    fn pair_groupoid_axioms_and_symplectic() {
        let sg = pair_groupoid(&plane()).unwrap();
        let ax = check_groupoid_axioms(&sg.groupoid).unwrap();
        assert!(ax.passed(), "{ax}");
        let sy = check_symplectic(&sg).unwrap();
        assert!(sy.passed(), "{sy}");
    }

    #[test]
    fn sabotaged_multiplication_breaks_unit_law() {
        let mut sg = pair_groupoid(&plane()).unwrap();
        let g = &mut sg.groupoid;
        let mut imgs = g.mult.images().to_vec();
        imgs[0] = g.composable.algebra.var("R_L_q").unwrap();
        g.mult = AlgebraMorphism::new(&g.total, &g.composable.algebra, imgs).unwrap();
        let ax = check_groupoid_axioms(g).unwrap();
        assert!(!ax.passed());
        assert!(!ax.item("left unit law").unwrap().passed || !ax.item("right unit law").unwrap().passed, "{ax}");
    }

    #[test]
    fn wrong_sign_pair_fails_coisotropy() {
        let p = plane();
        let mut sg = pair_groupoid(&p).unwrap();
        let t = Tensor::new("t", &[(LEFT, p.algebra()), (RIGHT, p.algebra())]).unwrap();
        sg.total_poisson = tensor_structure(&t, &[&p, &p]).unwrap().over(&sg.groupoid.total).unwrap();
        let r = check_symplectic(&sg).unwrap();
        let it = r.item("graph of multiplication is coisotropic").unwrap();
        assert!(!it.passed && it.witness.is_some(), "{r}");
    }

    #[test]
    fn cotangent_torus_is_symplectic() {
        for n in [1, 2] {
            let sg = cotangent_groupoid_torus(n).unwrap();
            let ax = check_groupoid_axioms(&sg.groupoid).unwrap();
            assert!(ax.passed(), "{ax}");
            let sy = check_symplectic(&sg).unwrap();
            assert!(sy.passed(), "{sy}");
        }
    }

    #[test]
    fn torus_determinant_block() {
        let sg = cotangent_groupoid_torus(1).unwrap();
        let cert = nondegeneracy_certificate(&sg.total_poisson).unwrap().unwrap();
        assert_eq!(cert, vec!["t".to_string(), "z".to_string()]);
    }

    #[test]
    fn zero_fiber_subgroupoid() {
        let sg = cotangent_groupoid_torus(1).unwrap();
        let g = &sg.groupoid;
        let h = Subgroupoid::new("H", g, vec![g.total.element("z").unwrap()], vec![g.base.element("z").unwrap()], true).unwrap();
        let r = check_subgroupoid(&h, Some(&sg)).unwrap();
        assert!(r.passed(), "{r}");
        let bad = Subgroupoid::new("B", g, vec![], vec![g.base.element("z").unwrap()], false).unwrap();
        assert!(!check_subgroupoid(&bad, Some(&sg)).unwrap().passed());
    }

    #[test]
    fn diagonal_stabilizers() {
        for sg in [pair_groupoid(&plane()).unwrap(), cotangent_groupoid_torus(1).unwrap()] {
            let (prod, h) = diagonal_stabilizer(&sg).unwrap();
            let r = check_subgroupoid(&h, Some(&prod)).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn small_groupoids_satisfy_axioms() {
        assert!(check_groupoid_axioms(&torus_group(1).unwrap()).unwrap().passed());
        let triv = trivial_groupoid().unwrap();
        assert!(check_groupoid_axioms(&triv.groupoid).unwrap().passed());
        assert!(check_symplectic(&triv).unwrap().passed());
        let prod = product_symplectic(&cotangent_groupoid_torus(1).unwrap(), &triv).unwrap();
        assert!(check_groupoid_axioms(&prod.groupoid).unwrap().passed());
        assert!(check_symplectic(&prod).unwrap().passed());
    }
}
