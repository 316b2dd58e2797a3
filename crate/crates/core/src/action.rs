//! Groupoid actions on affine schemes, the Hamiltonian condition, and
//! constructions on actions (restriction, products, factors).

use crate::algebra::{
    compose, fibered_coproduct, morphism_witness, morphisms_differ, AlgebraMorphism,
    FiberedCoproduct, PresentedAlgebra, Tensor, LEFT, RIGHT,
};
use crate::arith::{MonomialOrder, Polynomial, Ring};
use crate::check::{CheckReport, Witness};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::groupoid::{product_groupoid, AffineGroupoid, Subgroupoid, SymplecticGroupoid};
use crate::poisson::{coisotropy_witness, poisson_morphism_witness, tensor_structure, PoissonStructure};

/// A left action `G ×_{s,μ} M → M` as a comorphism
/// `act: k[M] → k[G] ⊗_{k[X]} k[M]`, glued along `src` and `moment`.
/// In the coproduct the groupoid variables carry `L_`, the module ones `R_`.
#[derive(Clone, Debug)]
pub struct GroupoidAction {
    pub label: String,
    pub groupoid: AffineGroupoid,
    pub module: PresentedAlgebra,
    pub moment: AlgebraMorphism,
    pub act: AlgebraMorphism,
    pub coproduct: FiberedCoproduct,
}

impl GroupoidAction {
    /// `act_images` are indexed by module variables and live over the coproduct ring.
    pub fn new(
        label: impl Into<String>,
        groupoid: &AffineGroupoid,
        module: &PresentedAlgebra,
        moment: AlgebraMorphism,
        act_images: Vec<Polynomial>,
    ) -> Result<Self> {
        let moment = moment.resource(&groupoid.base)?.retarget(module)?;
        let coproduct = fibered_coproduct(&groupoid.total, module, &groupoid.base, &groupoid.src, &moment)?;
        let act = AlgebraMorphism::new(module, &coproduct.algebra, act_images)?;
        Ok(GroupoidAction {
            label: label.into(),
            groupoid: groupoid.clone(),
            module: module.clone(),
            moment,
            act,
            coproduct,
        })
    }

    pub fn parse(
        label: impl Into<String>,
        groupoid: &AffineGroupoid,
        module: &PresentedAlgebra,
        moment: &[(&str, &str)],
        act: &[(&str, &str)],
    ) -> Result<Self> {
        let mu = AlgebraMorphism::parse(&groupoid.base, module, moment)?;
        let c = fibered_coproduct(&groupoid.total, module, &groupoid.base, &groupoid.src, &mu)?;
        let a = AlgebraMorphism::parse(module, &c.algebra, act)?;
        Self::new(label, groupoid, module, mu, a.images().to_vec())
    }

    /// Normal form of `A*f` in the coproduct: the canonical lift.
    pub fn lift(&self, f: &Polynomial) -> Result<Polynomial> {
        self.act.apply(f)
    }

    /// `A*f - 1⊗f` reduced; zero iff `f` is invariant.
    pub fn invariance_residue(&self, f: &Polynomial) -> Result<Polynomial> {
        let d = self.act.apply_raw(f)?.try_sub(&self.coproduct.right(f)?)?;
        self.coproduct.algebra.normal_form(&d)
    }
}

/// Same action with images moved along a renaming of coproduct variables.
fn rename_map<F>(from: &PresentedAlgebra, to: &PresentedAlgebra, rename: F) -> Result<AlgebraMorphism>
where
    F: Fn(&str) -> String,
{
    let imgs = from
        .ring()
        .names()
        .iter()
        .map(|n| to.var(&rename(n)))
        .collect::<Result<_>>()?;
    AlgebraMorphism::new(from, to, imgs)
}

fn swap_prefix(n: &str, left: &str, right: &str) -> String {
    if let Some(rest) = n.strip_prefix(LEFT) {
        format!("{left}{rest}")
    } else {
        format!("{right}{}", &n[RIGHT.len()..])
    }
}

/// Action axioms:
/// (i) `A*∘μ* = (t*⊗1)`, (ii) the unit acts trivially,
/// (iii) `(m*⊗id)∘A* = (id⊗A*)∘A*`.
pub fn check_action(a: &GroupoidAction) -> Result<CheckReport> {
    let g = &a.groupoid;
    let c = &a.coproduct;
    let mut r = CheckReport::new();
    r.record("moment well-defined", morphism_witness(&a.moment)?);
    r.record("action well-defined", morphism_witness(&a.act)?);

    let t_left = compose(&g.tgt, &c.left_inclusion()?)?;
    r.record("(i) moment is equivariant", morphisms_differ(&compose(&a.moment, &a.act)?, &t_left)?);

    let eps = c.mediate(&compose(&g.unit, &a.moment)?, &AlgebraMorphism::identity(&a.module))?;
    r.record(
        "(ii) units act trivially",
        morphisms_differ(&compose(&a.act, &eps)?, &AlgebraMorphism::identity(&a.module))?,
    );

    let t = Tensor::new(
        format!("{} triple", a.label),
        &[("A_", &g.total), ("B_", &g.total), ("M_", &a.module)],
    )?;
    let mut glue = Vec::new();
    for ((s, tt), mu) in g.src.images().iter().zip(g.tgt.images()).zip(a.moment.images()) {
        glue.push(t.embed(0, s)?.try_sub(&t.embed(1, tt)?)?);
        glue.push(t.embed(1, s)?.try_sub(&t.embed(2, mu)?)?);
    }
    let triple = t.glue(t.algebra.label().to_string(), glue)?;
    let ab = rename_map(&g.composable.algebra, &triple, |n| swap_prefix(n, "A_", "B_"))?;
    let bm = rename_map(&c.algebra, &triple, |n| swap_prefix(n, "B_", "M_"))?;
    let first = c.mediate(&compose(&g.mult, &ab)?, &t.inclusion_into(2, &triple)?)?;
    let second = c.mediate(&t.inclusion_into(0, &triple)?, &compose(&a.act, &bm)?)?;
    r.record(
        "(iii) compatible with multiplication",
        morphisms_differ(&compose(&a.act, &first)?, &compose(&a.act, &second)?)?,
    );
    Ok(r)
}

/// `A*f = 1⊗f`.
pub fn check_invariant(a: &GroupoidAction, f: &Polynomial) -> Result<bool> {
    Ok(a.invariance_residue(f)?.is_zero())
}

/// `psi: k[N] → k[M]` intertwines `a` (on `M`) and `b` (on `N`):
/// `A*∘ψ* = (id⊗ψ*)∘B*` and `ψ*∘ν* = μ*`.
pub fn equivariance_witness(a: &GroupoidAction, b: &GroupoidAction, psi: &AlgebraMorphism) -> Result<Option<Witness>> {
    Ring::check_same(psi.source().ring(), b.module.ring())?;
    Ring::check_same(psi.target().ring(), a.module.ring())?;
    if let Some(w) = morphisms_differ(&compose(&b.moment, psi)?.resource(&a.groupoid.base)?, &a.moment)? {
        return Ok(Some(Witness::new(format!("moment at {}", w.subject), w.residue)));
    }
    let ca = &a.coproduct;
    let idpsi_imgs = b
        .coproduct
        .ring()
        .names()
        .iter()
        .map(|n| {
            if let Some(g) = n.strip_prefix(LEFT) {
                ca.algebra.var(&format!("{LEFT}{g}"))
            } else {
                let m = &n[RIGHT.len()..];
                ca.right(psi.image_of(m)?)
            }
        })
        .collect::<Result<_>>()?;
    let idpsi = AlgebraMorphism::new(&b.coproduct.algebra, &ca.algebra, idpsi_imgs)?;
    let lhs = compose(psi, &a.act.resource(psi.target())?)?;
    let rhs = compose(&b.act, &idpsi)?;
    morphisms_differ(&lhs, &rhs)
}

pub fn check_equivariant(a: &GroupoidAction, b: &GroupoidAction, psi: &AlgebraMorphism) -> Result<bool> {
    Ok(equivariance_witness(a, b, psi)?.is_none())
}

/// Restriction of `a` to `H ⇉ S`, acting on `μ⁻¹(S)`.
pub fn restrict_action(a: &GroupoidAction, h: &Subgroupoid) -> Result<GroupoidAction> {
    if !Ring::same(h.parent.total.ring(), a.groupoid.total.ring())
        || !Ring::same(h.parent.base.ring(), a.groupoid.base.ring())
    {
        return Err(Error::Invalid(format!("{} is not a subgroupoid of {}", h.label, a.groupoid.label)));
    }
    let hg = h.as_groupoid()?;
    let fiber: Vec<Polynomial> = h
        .base_ideal
        .generators()
        .iter()
        .map(|f| a.moment.apply_raw(f))
        .collect::<Result<_>>()?;
    let module = a.module.quotient_by(format!("{}|{}", a.module.label(), h.label), &fiber)?;
    let moment = a.moment.resource(&hg.base)?.retarget(&module)?;
    let coproduct = fibered_coproduct(&hg.total, &module, &hg.base, &hg.src, &moment)?;
    let imgs = a
        .act
        .images()
        .iter()
        .map(|p| p.embed(coproduct.ring()))
        .collect::<Result<_>>()?;
    GroupoidAction::new(format!("{}|{}", a.label, h.label), &hg, &module, moment, imgs)
}

/// Ideal of `{(g, m, g·m)}` in `k[M] ⊗ k[G] ⊗ k[M]` (blocks `N_`, `G_`, `M_`:
/// result point first), with Poisson structure `-P_M ⊕ P_G ⊕ P_M`.
#[derive(Clone, Debug)]
pub struct GraphIdeal {
    pub tensor: Tensor,
    pub poisson: PoissonStructure,
    /// Moment matching and one generator per module variable; the block
    /// relations of the factors come on top.
    pub defining: Vec<Polynomial>,
    pub ideal: Ideal,
}

pub fn graph_ideal(a: &GroupoidAction, pg: &PoissonStructure, pm: &PoissonStructure) -> Result<GraphIdeal> {
    let g = &a.groupoid;
    let t = Tensor::new(
        format!("graph of {}", a.label),
        &[("N_", &a.module), ("G_", &g.total), ("M_", &a.module)],
    )?;
    let neg = pm.negate();
    let poisson = tensor_structure(&t, &[&neg, pg, pm])?;
    let mut gens = Vec::new();
    for (s, mu) in g.src.images().iter().zip(a.moment.images()) {
        gens.push(t.embed(1, s)?.try_sub(&t.embed(2, mu)?)?);
    }
    for v in a.module.vars() {
        let lift = a.lift(&v)?.rename_into(t.ring(), |n| swap_prefix(n, "G_", "M_"))?;
        gens.push(t.embed(0, &v)?.try_sub(&lift)?);
    }
    let split = a.module.ring().len();
    let mut all = t.algebra.relations().generators().to_vec();
    all.extend(gens.iter().cloned());
    let ideal = Ideal::new(t.ring(), all).with_order(MonomialOrder::elimination(split));
    Ok(GraphIdeal { tensor: t, poisson, defining: gens, ideal })
}

/// Verdicts of the Hamiltonian test. The graph coisotropy is authoritative;
/// the moment and lifted-bracket conditions are the equivalent diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianReport {
    pub coisotropy: Option<Witness>,
    pub moment_poisson: Option<Witness>,
    pub lifted_brackets: Option<Witness>,
}

impl HamiltonianReport {
    pub fn verdict(&self) -> bool {
        self.coisotropy.is_none()
    }

    pub fn conditions(&self) -> bool {
        self.moment_poisson.is_none() && self.lifted_brackets.is_none()
    }

    pub fn to_report(&self) -> CheckReport {
        let mut r = CheckReport::new();
        r.record("graph is coisotropic", self.coisotropy.clone());
        r.record("(i) moment is Poisson", self.moment_poisson.clone());
        r.record("(ii) lifted brackets", self.lifted_brackets.clone());
        r
    }
}

pub fn check_hamiltonian(a: &GroupoidAction, sg: &SymplecticGroupoid, pm: &PoissonStructure) -> Result<HamiltonianReport> {
    Ring::check_same(sg.groupoid.total.ring(), a.groupoid.total.ring())?;
    Ring::check_same(pm.algebra().ring(), a.module.ring())?;
    let gi = graph_ideal(a, &sg.total_poisson, pm)?;
    let coisotropy = coisotropy_witness(&gi.poisson, &gi.ideal)?;
    let moment_poisson = poisson_morphism_witness(&sg.base_poisson, pm, &a.moment, 1)?;
    let lifted_brackets = lifted_bracket_witness(a, sg, pm)?;
    Ok(HamiltonianReport {
        coisotropy,
        moment_poisson,
        lifted_brackets,
    })
}

/// `{lift A*h₁, lift A*h₂}` is a lift of `A*{h₁,h₂}` on generator pairs, and
/// the answer does not depend on the lift: brackets with the gluing relations
/// stay in the fibre-product ideal.
fn lifted_bracket_witness(a: &GroupoidAction, sg: &SymplecticGroupoid, pm: &PoissonStructure) -> Result<Option<Witness>> {
    let c = &a.coproduct;
    let pc = tensor_structure(&c.tensor, &[&sg.total_poisson, pm])?;
    let ideal = &c.algebra;
    let vars = a.module.vars();
    let lifts: Vec<Polynomial> = vars.iter().map(|v| a.lift(v)).collect::<Result<_>>()?;
    let names = a.module.ring().names();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            let lhs = pc.bracket_raw(&lifts[i], &lifts[j])?;
            let rhs = a.act.apply_raw(pm.entry(i, j))?;
            let d = ideal.normal_form(&lhs.try_sub(&rhs)?)?;
            if !d.is_zero() {
                return Ok(Some(Witness::new(format!("({}, {})", names[i], names[j]), d)));
            }
        }
    }
    for gamma in &c.glue {
        for (i, l) in lifts.iter().enumerate() {
            let d = ideal.normal_form(&pc.bracket_raw(gamma, l)?)?;
            if !d.is_zero() {
                return Ok(Some(Witness::new(format!("({gamma}, {})", names[i]), d)));
            }
        }
        for other in &c.glue {
            let d = ideal.normal_form(&pc.bracket_raw(gamma, other)?)?;
            if !d.is_zero() {
                return Ok(Some(Witness::new(format!("({gamma}, {other})"), d)));
            }
        }
    }
    Ok(None)
}

/// The action of `G × I` on `M` induced by commuting actions of `G` and `I`.
pub fn product_action(a: &GroupoidAction, b: &GroupoidAction) -> Result<GroupoidAction> {
    Ring::check_same(a.module.ring(), b.module.ring())?;
    let g = product_groupoid(&a.groupoid, &b.groupoid)?;
    let m = &a.module;
    let moment_imgs: Vec<Polynomial> = a.moment.images().iter().chain(b.moment.images()).cloned().collect();
    let moment = AlgebraMorphism::new(&g.base, m, moment_imgs)?;
    let c = fibered_coproduct(&g.total, m, &g.base, &g.src, &moment)?;
    let b_renamed: Vec<Polynomial> = b
        .act
        .images()
        .iter()
        .map(|p| p.rename_into(c.ring(), |n| swap_prefix(n, "L_R_", RIGHT)))
        .collect::<Result<_>>()?;
    let mut images: Vec<Polynomial> = Vec::new();
    for p in a.act.images() {
        let subst: Vec<Polynomial> = a
            .coproduct
            .ring()
            .names()
            .iter()
            .map(|n| {
                if let Some(gv) = n.strip_prefix(LEFT) {
                    c.algebra.var(&format!("L_L_{gv}"))
                } else {
                    let k = m.ring().require(&n[RIGHT.len()..])?;
                    Ok(b_renamed[k].clone())
                }
            })
            .collect::<Result<_>>()?;
        images.push(c.algebra.normal_form(&p.substitute(&subst, c.ring())?)?);
    }
    GroupoidAction::new(format!("{} x {}", a.label, b.label), &g, m, moment, images)
}

/// `G`-part of an action of `G × I` (built by [`product_groupoid`]): restrict
/// to `G × 1(Y)`.
pub fn factor_action(c: &GroupoidAction, g: &AffineGroupoid) -> Result<GroupoidAction> {
    let pg = &c.groupoid;
    let m = &c.module;
    let nu_unit = compose(&pg.unit, &c.moment)?;
    let moment_imgs = g
        .base
        .ring()
        .names()
        .iter()
        .map(|x| Ok(c.moment.image_of(&format!("{LEFT}{x}"))?.clone()))
        .collect::<Result<Vec<_>>>()?;
    let moment = AlgebraMorphism::new(&g.base, m, moment_imgs)?;
    let out = fibered_coproduct(&g.total, m, &g.base, &g.src, &moment)?;
    let subst: Vec<Polynomial> = c
        .coproduct
        .ring()
        .names()
        .iter()
        .map(|n| {
            if let Some(gv) = n.strip_prefix("L_L_") {
                out.algebra.var(&format!("{LEFT}{gv}"))
            } else if let Some(iv) = n.strip_prefix("L_R_") {
                out.right(nu_unit.image_of(&format!("{RIGHT}{iv}"))?)
            } else {
                out.algebra.var(n)
            }
        })
        .collect::<Result<_>>()?;
    let images = c
        .act
        .images()
        .iter()
        .map(|p| out.algebra.normal_form(&p.substitute(&subst, out.ring())?))
        .collect::<Result<_>>()?;
    GroupoidAction::new(format!("{}|{}", c.label, g.label), g, m, moment, images)
}

/// Moments are mutually invariant and `g·(i·m) = i·(g·m)`.
pub fn check_commuting(a: &GroupoidAction, b: &GroupoidAction) -> Result<CheckReport> {
    Ring::check_same(a.module.ring(), b.module.ring())?;
    let mut r = CheckReport::new();
    let inv = |act: &GroupoidAction, mom: &AlgebraMorphism| -> Result<Option<Witness>> {
        for p in mom.images() {
            let res = act.invariance_residue(p)?;
            if !res.is_zero() {
                return Ok(Some(Witness::new(p.to_string(), res)));
            }
        }
        Ok(None)
    };
    r.record(format!("moment of {} is {}-invariant", a.label, b.label), inv(b, &a.moment)?);
    r.record(format!("moment of {} is {}-invariant", b.label, a.label), inv(a, &b.moment)?);

    let t = Tensor::new(
        "commuting triple",
        &[("G_", &a.groupoid.total), ("I_", &b.groupoid.total), ("M_", &a.module)],
    )?;
    let mut glue = Vec::new();
    for (s, mu) in a.groupoid.src.images().iter().zip(a.moment.images()) {
        glue.push(t.embed(0, s)?.try_sub(&t.embed(2, mu)?)?);
    }
    for (s, nu) in b.groupoid.src.images().iter().zip(b.moment.images()) {
        glue.push(t.embed(1, s)?.try_sub(&t.embed(2, nu)?)?);
    }
    let triple = t.glue("commuting triple", glue)?;
    let into = |outer: &GroupoidAction, inner: &GroupoidAction, outer_p: &str, inner_p: &str| -> Result<Vec<Polynomial>> {
        let inner_imgs: Vec<Polynomial> = inner
            .act
            .images()
            .iter()
            .map(|p| p.rename_into(triple.ring(), |n| swap_prefix(n, inner_p, "M_")))
            .collect::<Result<_>>()?;
        outer
            .act
            .images()
            .iter()
            .map(|p| {
                let subst: Vec<Polynomial> = outer
                    .coproduct
                    .ring()
                    .names()
                    .iter()
                    .map(|n| {
                        if let Some(gv) = n.strip_prefix(LEFT) {
                            triple.var(&format!("{outer_p}{gv}"))
                        } else {
                            let k = outer.module.ring().require(&n[RIGHT.len()..])?;
                            Ok(inner_imgs[k].clone())
                        }
                    })
                    .collect::<Result<_>>()?;
                triple.normal_form(&p.substitute(&subst, triple.ring())?)
            })
            .collect()
    };
    let first = into(a, b, "G_", "I_")?;
    let second = into(b, a, "I_", "G_")?;
    let mut w = None;
    for (k, (x, y)) in first.iter().zip(&second).enumerate() {
        let d = triple.normal_form(&x.try_sub(y)?)?;
        if !d.is_zero() {
            w = Some(Witness::new(a.module.ring().name(k), d));
            break;
        }
    }
    r.record("actions commute", w);
    Ok(r)
}

/// `G × K` acting on `M ⊗ N` factorwise.
pub fn external_product_action(a: &GroupoidAction, b: &GroupoidAction) -> Result<GroupoidAction> {
    let g = product_groupoid(&a.groupoid, &b.groupoid)?;
    let mt = Tensor::new(format!("{} * {}", a.module.label(), b.module.label()), &[(LEFT, &a.module), (RIGHT, &b.module)])?;
    let module = mt.algebra.clone();
    let mut moment_imgs = Vec::new();
    for (k, act) in [a, b].into_iter().enumerate() {
        for p in act.moment.images() {
            moment_imgs.push(mt.embed(k, p)?);
        }
    }
    let moment = AlgebraMorphism::new(&g.base, &module, moment_imgs)?;
    let c = fibered_coproduct(&g.total, &module, &g.base, &g.src, &moment)?;
    let mut images = Vec::new();
    for (act, p) in [(a, LEFT), (b, RIGHT)] {
        for img in act.act.images() {
            images.push(img.rename_into(c.ring(), |n| {
                if let Some(rest) = n.strip_prefix(LEFT) {
                    format!("{LEFT}{p}{rest}")
                } else {
                    format!("{RIGHT}{p}{}", &n[RIGHT.len()..])
                }
            })?);
        }
    }
    GroupoidAction::new(format!("{} x {}", a.label, b.label), &g, &module, moment, images)
}

/// `G` acting diagonally on `M ×_X N`.
pub fn diagonal_action(a: &GroupoidAction, b: &GroupoidAction) -> Result<GroupoidAction> {
    Ring::check_same(a.groupoid.total.ring(), b.groupoid.total.ring())?;
    let g = &a.groupoid;
    let mn = fibered_coproduct(&a.module, &b.module, &g.base, &a.moment, &b.moment)?;
    let module = mn.algebra.clone();
    let moment_imgs = a
        .moment
        .images()
        .iter()
        .map(|p| mn.left(p))
        .collect::<Result<Vec<_>>>()?;
    let moment = AlgebraMorphism::new(&g.base, &module, moment_imgs)?;
    let c = fibered_coproduct(&g.total, &module, &g.base, &g.src, &moment)?;
    let mut images = Vec::new();
    for (act, p) in [(a, LEFT), (b, RIGHT)] {
        for img in act.act.images() {
            images.push(img.rename_into(c.ring(), |n| {
                if n.starts_with(LEFT) {
                    n.to_string()
                } else {
                    format!("{RIGHT}{p}{}", &n[RIGHT.len()..])
                }
            })?);
        }
    }
    GroupoidAction::new(format!("{} x {}", a.label, b.label), g, &module, moment, images)
}

/// `A*m = 1⊗m`; an action exactly when `s` and `t` agree along the moment.
pub fn trivial_action(g: &AffineGroupoid, module: &PresentedAlgebra, moment: AlgebraMorphism) -> Result<GroupoidAction> {
    let moment = moment.resource(&g.base)?.retarget(module)?;
    let c = fibered_coproduct(&g.total, module, &g.base, &g.src, &moment)?;
    let imgs = module.vars().iter().map(|v| c.right(v)).collect::<Result<_>>()?;
    GroupoidAction::new(format!("trivial on {}", module.label()), g, module, moment, imgs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::cotangent_groupoid_torus;

    fn flagship() -> (SymplecticGroupoid, PoissonStructure, GroupoidAction) {
        let sg = cotangent_groupoid_torus(1).unwrap();
        let m = PresentedAlgebra::parse("M", &["q1", "q2", "p1", "p2"], &[]).unwrap();
        let pm = PoissonStructure::from_brackets(&m, &[("q1", "p1", "1"), ("q2", "p2", "1")]).unwrap();
        let a = GroupoidAction::parse(
            "A",
            &sg.groupoid,
            &m,
            &[("z", "q1*p1 - q2*p2")],
            &[("q1", "L_t*R_q1"), ("q2", "L_u*R_q2"), ("p1", "L_u*R_p1"), ("p2", "L_t*R_p2")],
        )
        .unwrap();
        (sg, pm, a)
    }

    #[test]
    fn flagship_is_hamiltonian_action() {
        let (sg, pm, a) = flagship();
        let r = check_action(&a).unwrap();
        assert!(r.passed(), "{r}");
        let h = check_hamiltonian(&a, &sg, &pm).unwrap();
        assert!(h.verdict() && h.conditions(), "{}", h.to_report());
        assert_eq!(graph_ideal(&a, &sg.total_poisson, &pm).unwrap().defining.len(), 5);
    }

    #[test]
    fn wrong_weight_breaks_moment_equivariance() {
        let (sg, _, _) = flagship();
        let m = PresentedAlgebra::parse("M", &["q1", "q2", "p1", "p2"], &[]).unwrap();
        let a = GroupoidAction::parse(
            "bad",
            &sg.groupoid,
            &m,
            &[("z", "q1*p1 - q2*p2")],
            &[("q1", "L_t*R_q1"), ("q2", "L_u*R_q2"), ("p1", "L_u*R_p1"), ("p2", "L_u*R_p2")],
        )
        .unwrap();
        let r = check_action(&a).unwrap();
        assert!(!r.item("(i) moment is equivariant").unwrap().passed, "{r}");
    }

    #[test]
    fn invariants_and_equivariance() {
        let (_, _, a) = flagship();
        let m = &a.module;
        assert!(check_invariant(&a, &m.element("q1*q2").unwrap()).unwrap());
        assert!(!check_invariant(&a, &m.element("q1").unwrap()).unwrap());
        assert!(check_invariant(&a, &m.element("q1*p1 - q2*p2").unwrap()).unwrap());
        let swap = AlgebraMorphism::parse(m, m, &[("q1", "q2"), ("q2", "q1"), ("p1", "p1"), ("p2", "p2")]).unwrap();
        assert!(!check_equivariant(&a, &a, &swap).unwrap());
        assert!(check_equivariant(&a, &a, &AlgebraMorphism::identity(m)).unwrap());
    }

    #[test]
    fn zero_bracket_is_not_hamiltonian() {
        let (sg, _, a) = flagship();
        let zero = PoissonStructure::zero(&a.module);
        let h = check_hamiltonian(&a, &sg, &zero).unwrap();
        assert!(!h.verdict());
        assert!(!h.conditions());
    }

    #[test]
    fn negated_groupoid_is_not_hamiltonian() {
        let (sg, pm, a) = flagship();
        let h = check_hamiltonian(&a, &sg.negated(), &pm).unwrap();
        assert!(!h.verdict());
        assert!(!h.conditions());
    }

    #[test]
    fn restriction_to_zero_fiber() {
        let (sg, _, a) = flagship();
        let g = &sg.groupoid;
        let h = Subgroupoid::new("H", g, vec![g.total.element("z").unwrap()], vec![g.base.element("z").unwrap()], true).unwrap();
        let ra = restrict_action(&a, &h).unwrap();
        let r = check_action(&ra).unwrap();
        assert!(r.passed(), "{r}");
        assert!(ra.module.is_zero(&ra.module.element("q1*p1 - q2*p2").unwrap()).unwrap());
    }

    #[test]
    fn pair_groupoid_self_action() {
        let x = PresentedAlgebra::parse("X", &["q", "p"], &[]).unwrap();
        let p = PoissonStructure::from_brackets(&x, &[("q", "p", "1")]).unwrap();
        let sg = crate::groupoid::pair_groupoid(&p).unwrap();
        let a = GroupoidAction::parse("self", &sg.groupoid, &x, &[("q", "q"), ("p", "p")], &[("q", "L_L_q"), ("p", "L_L_p")]).unwrap();
        assert!(check_action(&a).unwrap().passed());
        let h = check_hamiltonian(&a, &sg, &p).unwrap();
        assert!(h.verdict() && h.conditions(), "{}", h.to_report());
        let c = check_commuting(&a, &a).unwrap();
        assert!(!c.passed());
    }
}
