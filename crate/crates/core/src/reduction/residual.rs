use crate::action::{check_action, check_commuting, check_hamiltonian, GroupoidAction};
use crate::algebra::{fibered_coproduct, morphism_witness, AlgebraMorphism, LEFT, RIGHT};
use crate::check::{CheckReport, Witness};
use crate::error::{Error, Result};
use crate::groebner::SubalgebraOracle;
use crate::groupoid::SymplecticGroupoid;

use super::{reduce, ReductionResult, ReductionSetup, Route};

/// Outcome of reducing by one action and descending a commuting one.
#[derive(Clone, Debug)]
pub struct Residual {
    pub reduction: ReductionResult,
    /// The commuting action restricted to `ν⁻¹(S)`.
    pub descended: GroupoidAction,
    /// The induced action on the reduced scheme.
    pub action: GroupoidAction,
    /// (i) descent to the fibre, (ii) invariants map to `k[G] ⊗ invariants`,
    /// (iii) action axioms, (iv) Hamiltonian.
    pub report: CheckReport,
}

/// Reduce by `setup` and push the commuting action `g_act` down to the result.
pub fn residual_action(
    g_act: &GroupoidAction,
    g_sg: &SymplecticGroupoid,
    setup: &ReductionSetup,
    d: u32,
    cap: usize,
) -> Result<Residual> {
    let commuting = check_commuting(g_act, &setup.action)?;
    if let Some(item) = commuting.first_failure() {
        return Err(Error::Invalid(format!(
            "actions do not commute: {} ({})",
            item.name,
            item.witness.as_ref().map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let reduction = reduce(setup, Route::RestrictFirst, d, cap)?;
    let fiber = &reduction.fiber;
    let g = &g_act.groupoid;
    let mut report = CheckReport::new();

    let descended = GroupoidAction::new(
        format!("{}|fibre", g_act.label),
        g,
        fiber,
        g_act.moment.retarget(fiber)?,
        g_act.act.images().to_vec(),
    )?;
    let wi = morphism_witness(&descended.act)?.or(morphism_witness(&descended.moment)?);
    report.record("(i) action descends to the fibre", wi);

    let c = &descended.coproduct;
    let tags: Vec<(String, crate::arith::Polynomial)> = reduction
        .generators
        .iter()
        .map(|(t, p)| Ok((format!("{RIGHT}{t}"), c.right(p)?)))
        .collect::<Result<_>>()?;
    let allowed: Vec<String> = c.ring().names().iter().filter(|n| n.starts_with(LEFT)).cloned().collect();
    let oracle = SubalgebraOracle::new(c.algebra.relations(), &tags, &allowed)?;
    let mut images = Vec::new();
    let mut wii = None;
    for (t, p) in &reduction.generators {
        let img = descended.act.apply(p)?;
        match oracle.express(&img)? {
            Some(e) => images.push(e),
            None => {
                wii = Some(Witness::new(t.clone(), img));
                break;
            }
        }
    }
    let stuck = wii.clone();
    report.record("(ii) invariants map into k[G] ⊗ invariants", wii);
    if let Some(w) = stuck {
        return Err(Error::Invalid(format!(
            "image of generator {} is not expressible at degree bound {d}: {}",
            w.subject, w.residue
        )));
    }

    let fiber_oracle = SubalgebraOracle::new(fiber.relations(), &reduction.generators, &[])?;
    let reduced = &reduction.reduced;
    let mut moment_imgs = Vec::new();
    for p in g_act.moment.images() {
        let nf = fiber.normal_form(p)?;
        let e = fiber_oracle.express(&nf)?.ok_or_else(|| {
            Error::Invalid(format!("moment component {nf} is not expressible at degree bound {d}"))
        })?;
        moment_imgs.push(e.embed(reduced.ring())?);
    }
    let moment = AlgebraMorphism::new(&g.base, reduced, moment_imgs)?;
    let cp = fibered_coproduct(&g.total, reduced, &g.base, &g.src, &moment)?;
    let images = images
        .iter()
        .map(|e| cp.algebra.normal_form(&e.embed(cp.ring())?))
        .collect::<Result<_>>()?;
    let action = GroupoidAction::new(format!("{} on {}", g_act.label, "reduced"), g, reduced, moment, images)?;
    report.absorb("(iii)", check_action(&action)?);
    report.absorb("(iv)", check_hamiltonian(&action, g_sg, &reduction.reduced_poisson)?.to_report());
    Ok(Residual {
        reduction,
        descended,
        action,
        report,
    })
}
