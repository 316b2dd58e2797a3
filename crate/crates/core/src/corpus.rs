//! Named example configurations used by tests, the acceptance suite and the
//! bundled session files.

use crate::action::{diagonal_action, trivial_action, GroupoidAction};
use crate::algebra::{AlgebraMorphism, PresentedAlgebra};
use crate::error::Result;
use crate::groupoid::{cotangent_groupoid_torus, pair_groupoid, torus_group, trivial_groupoid, Subgroupoid, SymplecticGroupoid};
use crate::poisson::PoissonStructure;
use crate::reduction::{Bimodule, ReductionSetup};

/// `k[q1, p1, q2, p2]` with `{qi, pi} = 1`.
pub fn canonical_four() -> Result<PoissonStructure> {
    let m = PresentedAlgebra::parse("k4", &["q1", "p1", "q2", "p2"], &[])?;
    PoissonStructure::from_brackets(&m, &[("q1", "p1", "1"), ("q2", "p2", "1")])
}

/// `k[q, p]` with `{q, p} = 1`.
pub fn canonical_plane() -> Result<PoissonStructure> {
    let m = PresentedAlgebra::parse("k2", &["q", "p"], &[])?;
    PoissonStructure::from_brackets(&m, &[("q", "p", "1")])
}

/// `T*G_m` acting with weights `(1, -1)` on `(q1, q2)` and `(-1, 1)` on
/// `(p1, p2)`, moment `q1 p1 - q2 p2`. With `flipped`, all weights are
/// negated, which is Hamiltonian for the negated groupoid.
pub fn weight_action(sg: &SymplecticGroupoid, pm: &PoissonStructure, flipped: bool) -> Result<GroupoidAction> {
    let (t, u) = if flipped { ("L_u", "L_t") } else { ("L_t", "L_u") };
    let q1 = format!("{t}*R_q1");
    let p1 = format!("{u}*R_p1");
    let q2 = format!("{u}*R_q2");
    let p2 = format!("{t}*R_p2");
    GroupoidAction::parse(
        if flipped { "weight(-1,1)" } else { "weight(1,-1)" },
        &sg.groupoid,
        pm.algebra(),
        &[("z", "q1*p1 - q2*p2")],
        &[("q1", &q1), ("p1", &p1), ("q2", &q2), ("p2", &p2)],
    )
}

/// The `z = 0` fibre of `T*G_m^n` with its full isotropy.
pub fn zero_fiber(sg: &SymplecticGroupoid) -> Result<Subgroupoid> {
    let g = &sg.groupoid;
    let total = g.base.ring().names().iter().map(|z| g.total.var(z)).collect::<Result<_>>()?;
    let base = g.base.vars();
    Subgroupoid::new("H0", g, total, base, true)
}

/// Weight-`(1,-1)` action of `T*G_m` on canonical `k^4`, reduced at `z = 0`.
pub fn flagship() -> Result<ReductionSetup> {
    let sg = cotangent_groupoid_torus(1)?;
    let pm = canonical_four()?;
    let action = weight_action(&sg, &pm, false)?;
    let stabilizer = zero_fiber(&sg)?;
    Ok(ReductionSetup {
        action,
        symplectic: sg,
        poisson: pm,
        stabilizer,
    })
}

/// Two `T*G_m` actions on `k^4`, scaling `(q1, p1)` and `(q2, p2)`, with
/// moments `q1 p1` and `q2 p2`. Returns the first action with its groupoid
/// and the reduction data of the second at `z = 0`.
pub fn two_torus() -> Result<(GroupoidAction, SymplecticGroupoid, ReductionSetup)> {
    let sg = cotangent_groupoid_torus(1)?;
    let pm = canonical_four()?;
    let m = pm.algebra();
    let g = GroupoidAction::parse(
        "first",
        &sg.groupoid,
        m,
        &[("z", "q1*p1")],
        &[("q1", "L_t*R_q1"), ("p1", "L_u*R_p1"), ("q2", "R_q2"), ("p2", "R_p2")],
    )?;
    let i = GroupoidAction::parse(
        "second",
        &sg.groupoid,
        m,
        &[("z", "q2*p2")],
        &[("q1", "R_q1"), ("p1", "R_p1"), ("q2", "L_t*R_q2"), ("p2", "L_u*R_p2")],
    )?;
    let stabilizer = zero_fiber(&sg)?;
    Ok((
        g,
        sg.clone(),
        ReductionSetup {
            action: i,
            symplectic: sg,
            poisson: pm,
            stabilizer,
        },
    ))
}

/// As [`two_torus`], but the second action scales `(q1 + q2, p2)` in the
/// Darboux chart `(q1, p1 - p2, q1 + q2, p2)`; it no longer commutes with
/// the first.
pub fn two_torus_sabotaged() -> Result<(GroupoidAction, SymplecticGroupoid, ReductionSetup)> {
    let (g, sg, mut setup) = two_torus()?;
    let m = setup.poisson.algebra().clone();
    setup.action = GroupoidAction::parse(
        "sheared second",
        &sg.groupoid,
        &m,
        &[("z", "q1*p2 + q2*p2")],
        &[
            ("q1", "R_q1"),
            ("p1", "R_p1 - R_p2 + L_u*R_p2"),
            ("q2", "L_t*R_q1 + L_t*R_q2 - R_q1"),
            ("p2", "L_u*R_p2"),
        ],
    )?;
    Ok((g, sg, setup))
}

/// The pair groupoid of the plane acting on the plane, `(x, y)·y = x`.
pub fn pair_self_action() -> Result<(SymplecticGroupoid, PoissonStructure, GroupoidAction)> {
    let p = canonical_plane()?;
    let sg = pair_groupoid(&p)?;
    let a = GroupoidAction::parse("pair", &sg.groupoid, p.algebra(), &[("q", "q"), ("p", "p")], &[("q", "L_L_q"), ("p", "L_L_p")])?;
    Ok((sg, p, a))
}

/// Reduction of the pair-groupoid self action at the origin: the fibre is a
/// point, so only constants survive.
pub fn pair_at_origin() -> Result<ReductionSetup> {
    let (sg, p, a) = pair_self_action()?;
    let g = &sg.groupoid;
    let total = ["L_q", "L_p", "R_q", "R_p"].iter().map(|v| g.total.var(v)).collect::<Result<_>>()?;
    let h = Subgroupoid::new("origin", g, total, g.base.vars(), true)?;
    Ok(ReductionSetup {
        action: a,
        symplectic: sg,
        poisson: p,
        stabilizer: h,
    })
}

/// The trivial groupoid acting trivially on canonical `k^4`.
pub fn trivial_on_four() -> Result<ReductionSetup> {
    let sg = trivial_groupoid()?;
    let pm = canonical_four()?;
    let mu = AlgebraMorphism::new(&sg.groupoid.base, pm.algebra(), Vec::new())?;
    let a = trivial_action(&sg.groupoid, pm.algebra(), mu)?;
    let h = Subgroupoid::new("all", &sg.groupoid, Vec::new(), Vec::new(), true)?;
    Ok(ReductionSetup {
        action: a,
        symplectic: sg,
        poisson: pm,
        stabilizer: h,
    })
}

/// `G_m` (over a point) scaling `k[x, y]` with weights `(1, -1)`, and acting
/// trivially on `k[w]`; returns both factors and the diagonal action on the
/// product.
pub fn product_fixture() -> Result<(GroupoidAction, GroupoidAction, GroupoidAction)> {
    let g = torus_group(1)?;
    let m = PresentedAlgebra::parse("k[x,y]", &["x", "y"], &[])?;
    let n = PresentedAlgebra::parse("k[w]", &["w"], &[])?;
    let a = GroupoidAction::parse("weights", &g, &m, &[], &[("x", "L_t*R_x"), ("y", "L_u*R_y")])?;
    let b = trivial_action(&g, &n, AlgebraMorphism::new(&g.base, &n, Vec::new())?)?;
    let d = diagonal_action(&a, &b)?;
    Ok((a, b, d))
}

/// The flagship module as a bimodule: nothing on the left, `T*G_m` on the
/// right with the negated weights (Hamiltonian for the negated groupoid).
pub fn flagship_bimodule() -> Result<Bimodule> {
    let i = cotangent_groupoid_torus(1)?;
    let one = trivial_groupoid()?;
    let pm = canonical_four()?;
    let right = weight_action(&i, &pm, true)?;
    let mu = AlgebraMorphism::new(&one.groupoid.base, pm.algebra(), Vec::new())?;
    let left = trivial_action(&one.groupoid, pm.algebra(), mu)?;
    Ok(Bimodule {
        label: "flagship".into(),
        left,
        left_groupoid: one,
        right,
        right_groupoid: i,
        poisson: pm,
    })
}
