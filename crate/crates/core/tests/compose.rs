use coisored_core::action::{check_action, check_hamiltonian};
use coisored_core::corpus;
use coisored_core::groupoid::cotangent_groupoid_torus;
use coisored_core::reduction::{compose_hamiltonian_schemes, unit_bimodule, unit_isomorphism, CLOSURE_CAP};

#[test]
fn unit_bimodule_actions_are_hamiltonian() {
    let i = cotangent_groupoid_torus(1).unwrap();
    let u = unit_bimodule(&i).unwrap();
    for (a, sg) in [(&u.left, u.left_groupoid.clone()), (&u.right, u.right_groupoid.negated())] {
        let r = check_action(a).unwrap();
        assert!(r.passed(), "{}: {r}", a.label);
        let h = check_hamiltonian(a, &sg, &u.poisson).unwrap();
        assert!(h.verdict() && h.conditions(), "{}: {}", a.label, h.to_report());
    }
}

#[test]
fn flagship_bimodule_is_hamiltonian_for_negation() {
    let m = corpus::flagship_bimodule().unwrap();
    let h = check_hamiltonian(&m.right, &m.right_groupoid.negated(), &m.poisson).unwrap();
    assert!(h.verdict() && h.conditions(), "{}", h.to_report());
    let h = check_hamiltonian(&m.right, &m.right_groupoid, &m.poisson).unwrap();
    assert!(!h.verdict());
}

#[test]
fn composing_with_unit_reproduces_module() {
    let m = corpus::flagship_bimodule().unwrap();
    let u = unit_bimodule(&m.right_groupoid).unwrap();
    let c = compose_hamiltonian_schemes(&m, &u, 2, CLOSURE_CAP).unwrap();
    println!("{}", c.residual.reduction);
    assert!(c.residual.report.passed(), "{}", c.residual.report);
    let iso = unit_isomorphism(&m, &c).unwrap();
    assert!(iso.holds(), "{}", iso.report);
}
