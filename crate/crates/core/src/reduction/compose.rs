use crate::action::{external_product_action, GroupoidAction};
use crate::algebra::{compose, fibered_coproduct, morphism_witness, morphisms_differ, product_algebra, AlgebraMorphism, LEFT, RIGHT};
use crate::arith::Polynomial;
use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::groebner::SubalgebraOracle;
use crate::groupoid::{diagonal_stabilizer, product_symplectic, SymplecticGroupoid};
use crate::poisson::{poisson_morphism_witness, tensor_structure, PoissonStructure};

use super::{residual_action, ReductionSetup, Residual};

/// A Poisson scheme with commuting Hamiltonian actions of `G` (on the left)
/// and `I⁻` (on the right). `right_groupoid` is `I` itself; the right action
/// is Hamiltonian for its negation.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub label: String,
    pub left: GroupoidAction,
    pub left_groupoid: SymplecticGroupoid,
    pub right: GroupoidAction,
    pub right_groupoid: SymplecticGroupoid,
    pub poisson: PoissonStructure,
}

/// `M ∘ N`: reduction of `M × N` by the diagonal of `I`.
#[derive(Clone, Debug)]
pub struct Composition {
    pub residual: Residual,
    /// `G × K⁻`.
    pub outer: SymplecticGroupoid,
    /// `I⁻ × I` acting on `M × N`.
    pub inner: GroupoidAction,
}

pub fn compose_hamiltonian_schemes(m: &Bimodule, n: &Bimodule, d: u32, cap: usize) -> Result<Composition> {
    let i = &m.right_groupoid;
    let same = crate::arith::Ring::same;
    if !same(i.groupoid.total.ring(), n.left_groupoid.groupoid.total.ring())
        || !same(i.groupoid.base.ring(), n.left_groupoid.groupoid.base.ring())
    {
        return Err(Error::NotComposable(format!(
            "{} is acted on by {} on the right but {} by {} on the left",
            m.label,
            i.label(),
            n.label,
            n.left_groupoid.label()
        )));
    }
    let outer_action = external_product_action(&m.left, &n.right)?;
    let outer = product_symplectic(&m.left_groupoid, &n.right_groupoid.negated())?;
    let inner = external_product_action(&m.right, &n.left)?;
    let (prod, diag) = diagonal_stabilizer(&n.left_groupoid)?;
    let t = product_algebra(&m.left.module, &n.left.module)?;
    let poisson = tensor_structure(&t, &[&m.poisson, &n.poisson])?.over(&inner.module)?;
    let setup = ReductionSetup {
        action: inner.clone(),
        symplectic: prod,
        poisson,
        stabilizer: diag,
    };
    let residual = residual_action(&outer_action, &outer, &setup, d, cap)?;
    Ok(Composition { residual, outer, inner })
}

/// `I` as a bimodule over itself: left multiplication (moment `t`) and
/// `g·h = h g⁻¹` (moment `s`).
pub fn unit_bimodule(sg: &SymplecticGroupoid) -> Result<Bimodule> {
    let g = &sg.groupoid;
    let module = g.total.clone();
    let left = GroupoidAction::new(
        format!("{} on itself (left)", g.label),
        g,
        &module,
        g.tgt.clone(),
        g.mult.images().to_vec(),
    )?;
    let c = fibered_coproduct(&g.total, &module, &g.base, &g.src, &g.src)?;
    let subst: Vec<Polynomial> = g
        .composable
        .ring()
        .names()
        .iter()
        .map(|nm| {
            if let Some(x) = nm.strip_prefix(LEFT) {
                c.algebra.var(&format!("{RIGHT}{x}"))
            } else {
                c.left(g.inv.image_of(&nm[RIGHT.len()..])?)
            }
        })
        .collect::<Result<_>>()?;
    let right_imgs = g
        .mult
        .images()
        .iter()
        .map(|p| c.algebra.normal_form(&p.substitute(&subst, c.ring())?))
        .collect::<Result<_>>()?;
    let right = GroupoidAction::new(format!("{} on itself (right)", g.label), g, &module, g.src.clone(), right_imgs)?;
    Ok(Bimodule {
        label: format!("unit({})", g.label),
        left,
        left_groupoid: sg.clone(),
        right,
        right_groupoid: sg.clone(),
        poisson: sg.total_poisson.clone(),
    })
}

/// Mutually inverse morphisms between two presented Poisson algebras,
/// with the checks that certify them.
#[derive(Clone, Debug)]
pub struct PresentationIsomorphism {
    pub forward: AlgebraMorphism,
    pub backward: AlgebraMorphism,
    pub report: CheckReport,
}

impl PresentationIsomorphism {
    pub fn holds(&self) -> bool {
        self.report.passed()
    }
}

/// Certify `forward: A → B`, `backward: B → A` as inverse Poisson isomorphisms.
pub fn presentation_isomorphism(
    pa: &PoissonStructure,
    pb: &PoissonStructure,
    forward: AlgebraMorphism,
    backward: AlgebraMorphism,
) -> Result<PresentationIsomorphism> {
    let mut r = CheckReport::new();
    r.record("forward well-defined", morphism_witness(&forward)?);
    r.record("backward well-defined", morphism_witness(&backward)?);
    r.record(
        "backward after forward is the identity",
        morphisms_differ(&compose(&forward, &backward)?, &AlgebraMorphism::identity(forward.source()))?,
    );
    r.record(
        "forward after backward is the identity",
        morphisms_differ(&compose(&backward, &forward)?, &AlgebraMorphism::identity(backward.source()))?,
    );
    r.record("forward is Poisson", poisson_morphism_witness(pa, pb, &forward, 1)?);
    Ok(PresentationIsomorphism { forward, backward, report: r })
}

/// For `N = unit(I)`, compare `M ∘ N` with `M`: a function `f` on `M`
/// corresponds to `(m, h) ↦ f(h⁻¹·m)`; a reduced generator restricts to the
/// section `h = 1(μ(m))`.
pub fn unit_isomorphism(m: &Bimodule, comp: &Composition) -> Result<PresentationIsomorphism> {
    let red = &comp.residual.reduction;
    let fiber = &red.fiber;
    let ra = &m.right;
    let ig = &ra.groupoid;
    let oracle = SubalgebraOracle::new(fiber.relations(), &red.generators, &[])?;
    let subst: Vec<Polynomial> = ra
        .coproduct
        .ring()
        .names()
        .iter()
        .map(|nm| {
            if let Some(x) = nm.strip_prefix(LEFT) {
                ig.inv.image_of(x)?.rename_into(fiber.ring(), |v| format!("{RIGHT}{v}"))
            } else {
                fiber.var(&format!("{LEFT}{}", &nm[RIGHT.len()..]))
            }
        })
        .collect::<Result<_>>()?;
    let mut fwd = Vec::new();
    for p in ra.act.images() {
        let f = fiber.normal_form(&p.substitute(&subst, fiber.ring())?)?;
        let e = oracle
            .express(&f)?
            .ok_or_else(|| Error::Invalid(format!("{f} is not expressible in the reduced generators")))?;
        fwd.push(red.reduced.normal_form(&e.embed(red.reduced.ring())?)?);
    }
    let module = &ra.module;
    let unit_then_moment = compose(&ig.unit, &ra.moment)?;
    let section: Vec<Polynomial> = fiber
        .ring()
        .names()
        .iter()
        .map(|nm| {
            if let Some(x) = nm.strip_prefix(LEFT) {
                module.var(x)
            } else {
                Ok(unit_then_moment.image_of(&nm[RIGHT.len()..])?.clone())
            }
        })
        .collect::<Result<_>>()?;
    let bwd = red
        .generators
        .iter()
        .map(|(_, g)| module.normal_form(&g.substitute(&section, module.ring())?))
        .collect::<Result<_>>()?;
    let forward = AlgebraMorphism::new(module, &red.reduced, fwd)?;
    let backward = AlgebraMorphism::new(&red.reduced, module, bwd)?;
    presentation_isomorphism(&m.poisson, &red.reduced_poisson, forward, backward)
}

