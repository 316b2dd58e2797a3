use coisored_core::algebra::PresentedAlgebra;
use coisored_core::arith::{poly, Ring};
use coisored_core::corpus;
use coisored_core::groebner::Ideal;
use coisored_core::reduction::{
    fiber_invariance, invariants_up_to_degree, present_reduced, reduce, reduced_bracket, residual_action,
    verify_reduction, InvarianceTest, Route, CLOSURE_CAP,
};

/// Brackets of `q1 p1`, `q1 q2`, `p1 p2` from `{qi, pj} = δij` by the Leibniz
/// rule, written out by hand, reduced modulo `q1 p1 - q2 p2`.
fn flagship_oracle() -> Vec<(&'static str, &'static str, &'static str)> {
    // {q1p1, q1q2} = q1{p1,q1}q2 = -q1q2
    // {q1p1, p1p2} = {q1,p1}p1p2 = p1p2
    // {q1q2, p1p2} = q2p2 + q1p1 ≡ 2 q1p1
    vec![("q1*p1", "q1*q2", "-q1*q2"), ("q1*p1", "p1*p2", "p1*p2"), ("q1*q2", "p1*p2", "2*q1*p1")]
}

#[test]
fn flagship_invariants() {
    let setup = corpus::flagship().unwrap();
    let test = fiber_invariance(&setup, Route::RestrictFirst).unwrap();
    let inv = invariants_up_to_degree(&test, 2).unwrap();
    let gens: Vec<String> = inv.generators.iter().map(|(t, g)| format!("{t}={g}")).collect();
    assert_eq!(gens, ["a=q2*p2", "b=p1*p2", "c=q1*q2"]);
    assert_eq!(inv.dimensions(), [(0, 1), (1, 0), (2, 3)]);
    for (_, polys) in &inv.per_degree {
        for f in polys {
            assert!(test.is_invariant(f).unwrap());
        }
    }
}

#[test]
fn flagship_reduction_matches_oracle() {
    let setup = corpus::flagship().unwrap();
    let r = reduce(&setup, Route::RestrictFirst, 2, CLOSURE_CAP).unwrap();
    assert_eq!(r.presentation(), "k[a, b, c]/<a^2 - b*c>");
    let entries: Vec<String> = r.bracket_entries().iter().map(|(a, b, p)| format!("{{{a},{b}}}={p}")).collect();
    assert_eq!(entries, ["{a,b}=b", "{a,c}=-c", "{b,c}=-2*a"]);
    assert!(r.closure_log.is_empty());

    // Oracle: evaluate the reduced table through the projection and compare
    // with the hand computation on k^4 modulo the moment.
    let k4 = Ring::new(["q1", "p1", "q2", "p2"]).unwrap();
    let fiber = Ideal::new(&k4, vec![poly(&k4, "q1*p1 - q2*p2")]);
    let name = |text: &str| match text {
        "q1*p1" => "a",
        "p1*p2" => "b",
        "q1*q2" => "c",
        _ => unreachable!(),
    };
    for (f, g, expected) in flagship_oracle() {
        let (i, j) = (r.tags().iter().position(|t| t == name(f)).unwrap(), r.tags().iter().position(|t| t == name(g)).unwrap());
        let ours = r.projection.apply_raw(r.reduced_poisson.entry(i, j)).unwrap().embed(&k4).unwrap();
        assert!(fiber.contains(&(&ours - &poly(&k4, expected))).unwrap(), "{{{f}, {g}}}");
    }
}

#[test]
fn routes_agree() {
    let setup = corpus::flagship().unwrap();
    let a = reduce(&setup, Route::RestrictFirst, 2, CLOSURE_CAP).unwrap();
    let b = reduce(&setup, Route::QuotientFirst, 2, CLOSURE_CAP).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_string(), b.to_string());
}

#[test]
fn quotient_route_needs_full_restriction() {
    let mut setup = corpus::flagship().unwrap();
    let g = &setup.symplectic.groupoid;
    let units = ["z", "t - 1", "u - 1"].iter().map(|p| g.total.element(p).unwrap()).collect();
    setup.stabilizer = coisored_core::groupoid::Subgroupoid::new("units", g, units, g.base.vars(), false).unwrap();
    assert!(reduce(&setup, Route::QuotientFirst, 1, CLOSURE_CAP).is_err());
}

#[test]
fn ambient_linear_invariants_are_constants() {
    let setup = corpus::flagship().unwrap();
    let test = InvarianceTest::from_action(&setup.action).unwrap();
    let inv = invariants_up_to_degree(&test, 1).unwrap();
    assert!(inv.generators.is_empty());
    assert_eq!(inv.dimensions(), [(0, 1), (1, 0)]);
}

#[test]
fn trivial_action_everything_invariant() {
    let setup = corpus::trivial_on_four().unwrap();
    let test = fiber_invariance(&setup, Route::RestrictFirst).unwrap();
    let inv = invariants_up_to_degree(&test, 1).unwrap();
    assert_eq!(inv.dimensions(), [(0, 1), (1, 4)]);
    let r = reduced_bracket(&inv, &setup.poisson, CLOSURE_CAP).unwrap();
    assert_eq!(r.presentation(), "k[a, b, c, d]");
    assert_eq!(r.bracket_entries().len(), 2);
}

#[test]
fn constants_only_gives_point() {
    let setup = corpus::pair_at_origin().unwrap();
    let r = reduce(&setup, Route::RestrictFirst, 2, CLOSURE_CAP).unwrap();
    assert_eq!(r.presentation(), "k[]");
    assert!(r.bracket_entries().is_empty());
    assert!(verify_reduction(&r, 5, 0).unwrap().passed());
}

#[test]
fn presentations_of_small_subalgebras() {
    let x = PresentedAlgebra::parse("k[x]", &["x"], &[]).unwrap();
    let mut inv = invariants_up_to_degree(&coisored_core::reduction::InvarianceTest {
        module: x.clone(),
        check: x.clone(),
        act: coisored_core::algebra::AlgebraMorphism::identity(&x),
        right: coisored_core::algebra::AlgebraMorphism::identity(&x),
    }, 1)
    .unwrap();
    let (alg, _) = present_reduced(&inv).unwrap();
    assert!(alg.relations().generators().is_empty());
    inv.generators.push(("b".into(), x.element("x^2").unwrap()));
    let (alg, _) = present_reduced(&inv).unwrap();
    assert_eq!(alg.relations().generators()[0].to_string(), "a^2 - b");
}

#[test]
fn verification_suite_and_sabotage() {
    let setup = corpus::flagship().unwrap();
    let r = reduce(&setup, Route::RestrictFirst, 2, CLOSURE_CAP).unwrap();
    let rep = verify_reduction(&r, 20, 7).unwrap();
    assert!(rep.passed(), "{rep}");
    let mut bad = r.clone();
    let wrong = bad.reduced.element("a").unwrap();
    bad.reduced_poisson = bad.reduced_poisson.with_entry_unchecked(0, 1, wrong);
    let rep = verify_reduction(&bad, 3, 7).unwrap();
    assert!(!rep.item("(a) lift independence").unwrap().passed || !rep.item("(d) Jacobi identity").unwrap().passed);
}

#[test]
fn residual_two_torus() {
    let (g, gsg, setup) = corpus::two_torus().unwrap();
    let res = residual_action(&g, &gsg, &setup, 2, CLOSURE_CAP).unwrap();
    assert!(res.report.passed(), "{}", res.report);
    assert_eq!(res.reduction.presentation(), "k[a, b]");
}

#[test]
fn residual_refuses_non_commuting() {
    let (g, gsg, setup) = corpus::two_torus_sabotaged().unwrap();
    let c = coisored_core::action::check_commuting(&g, &setup.action).unwrap();
    let f = c.first_failure().unwrap();
    assert!(f.witness.is_some());
    assert!(residual_action(&g, &gsg, &setup, 2, CLOSURE_CAP).is_err());
}
