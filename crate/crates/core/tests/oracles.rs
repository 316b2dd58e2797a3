//! Hand-derived fixtures checked against small independent oracles.

use coisored_core::algebra::PresentedAlgebra;
use coisored_core::arith::{poly, Monomial, MonomialOrder, Polynomial, Ring, RingRef, Q};
use coisored_core::groebner::{elimination_ideal, groebner_basis, Ideal};
use coisored_core::poisson::{check_jacobi, PoissonStructure};
use num_traits::{One, Zero};

/// Textbook Buchberger: all pairs, no criteria, then interreduce.
fn naive_basis(gens: &[Polynomial], order: &MonomialOrder) -> Vec<Polynomial> {
    let lead = |f: &Polynomial| f.leading(order).cloned().unwrap();
    let reduce = |f: &Polynomial, g: &[Polynomial]| -> Polynomial {
        let ring = f.ring().clone();
        let mut p = f.clone();
        let mut r = Polynomial::zero(&ring);
        while !p.is_zero() {
            let (m, c) = lead(&p);
            match g.iter().find(|h| lead(h).0.divides(&m)) {
                Some(h) => {
                    let (hm, hc) = lead(h);
                    p = &p - &h.mul_term(&hm.quotient_of(&m), &(&c / &hc));
                }
                None => {
                    let t = Polynomial::monomial(&ring, m, c);
                    r = &r + &t;
                    p = &p - &t;
                }
            }
        }
        r
    };
    let mut g: Vec<Polynomial> = gens.iter().filter(|f| !f.is_zero()).cloned().collect();
    loop {
        let mut added = false;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let ((a, ca), (b, cb)) = (lead(&g[i]), lead(&g[j]));
                let l = a.lcm(&b);
                let s = &g[i].mul_term(&a.quotient_of(&l), &(Q::one() / &ca)) - &g[j].mul_term(&b.quotient_of(&l), &(Q::one() / &cb));
                let r = reduce(&s, &g);
                if !r.is_zero() {
                    g.push(r);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    // minimal, then reduced and monic
    let mut min: Vec<Polynomial> = Vec::new();
    for (i, f) in g.iter().enumerate() {
        let m = lead(f).0;
        let redundant = g.iter().enumerate().any(|(j, h)| {
            let hm = lead(h).0;
            j != i && hm.divides(&m) && (hm != m || j < i)
        });
        if !redundant {
            min.push(f.scale(&(Q::one() / &lead(f).1)));
        }
    }
    let mut out: Vec<Polynomial> = (0..min.len())
        .map(|i| {
            let others: Vec<Polynomial> = min.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h.clone()).collect();
            let (m, c) = lead(&min[i]);
            let tail = &min[i] - &Polynomial::monomial(min[i].ring(), m.clone(), c);
            &Polynomial::monomial(min[i].ring(), m, Q::one()) + &reduce(&tail, &others)
        })
        .collect();
    out.sort_by(|a, b| order.cmp(&lead(b).0, &lead(a).0));
    out
}

fn ours(gens: &[Polynomial], ring: &RingRef, order: &MonomialOrder) -> Vec<Polynomial> {
    let mut v = groebner_basis(&Ideal::new(ring, gens.to_vec()), order).unwrap().polynomials().to_vec();
    v.sort_by(|a, b| order.cmp(&b.leading(order).unwrap().0, &a.leading(order).unwrap().0));
    v
}

fn lex_fixture(names: &[&str], gens: &[&str]) -> (RingRef, Vec<Polynomial>) {
    let r = Ring::new(names.iter().copied()).unwrap();
    let g = gens.iter().map(|t| poly(&r, t)).collect();
    (r, g)
}

#[test]
fn linear_chain_lex() {
    let (r, g) = lex_fixture(&["x", "y", "z"], &["x - y", "y - z"]);
    let b = ours(&g, &r, &MonomialOrder::Lex);
    assert_eq!(b, naive_basis(&g, &MonomialOrder::Lex));
    assert_eq!(b, vec![poly(&r, "x - z"), poly(&r, "y - z")]);
}

#[test]
fn square_and_xy_plus_one_is_unit() {
    // S(x^2, xy + 1) = -x, so x and then 1 = (xy + 1) - y*x lie in the ideal.
    let (r, g) = lex_fixture(&["x", "y"], &["x^2", "x*y + 1"]);
    let b = ours(&g, &r, &MonomialOrder::Lex);
    assert_eq!(b, naive_basis(&g, &MonomialOrder::Lex));
    assert_eq!(b, vec![Polynomial::one(&r)]);
    assert!(Ideal::new(&r, g).is_unit().unwrap());
}

#[test]
fn brute_force_matches_on_small_systems() {
    let cases: &[(&[&str], &[&str])] = &[
        (&["x", "y"], &["x^2 - y", "x*y - 1"]),
        (&["x", "y", "z"], &["x*y - z", "y*z - x", "z*x - y"]),
        (&["x", "y"], &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"]),
    ];
    for (names, gens) in cases {
        let (r, g) = lex_fixture(names, gens);
        for order in [MonomialOrder::Lex, MonomialOrder::GrevLex] {
            assert_eq!(ours(&g, &r, &order), naive_basis(&g, &order), "{gens:?} {order:?}");
        }
    }
}

/// Five kernels `I ∩ k[kept]` derived by hand.
#[test]
fn elimination_kernels() {
    let fixtures: &[(&[&str], &[&str], &[&str], &[&str])] = &[
        // twisted cubic: (t, t^2, t^3)
        (&["t", "x", "y", "z"], &["x - t", "y - t^2", "z - t^3"], &["x", "y", "z"], &["y^2 - x*z", "x*y - z", "x^2 - y"]),
        // parabola: (t, t^2)
        (&["t", "x", "y"], &["x - t", "y - t^2"], &["x", "y"], &["x^2 - y"]),
        // cuspidal cubic: (t^2, t^3)
        (&["t", "x", "y"], &["x - t^2", "y - t^3"], &["x", "y"], &["x^3 - y^2"]),
        // unit circle by the hyperbola t*u = 1 with x = t + u
        (&["t", "u", "x"], &["t*u - 1", "x - t - u"], &["x"], &[]),
        // invariants q1p1, q1q2, p1p2 on q1p1 = q2p2
        (
            &["q1", "p1", "q2", "p2", "a", "b", "c"],
            &["q1*p1 - q2*p2", "a - q1*p1", "b - q1*q2", "c - p1*p2"],
            &["a", "b", "c"],
            &["a^2 - b*c"],
        ),
    ];
    for (names, gens, keep, expected) in fixtures {
        let (r, g) = lex_fixture(names, gens);
        let e = elimination_ideal(&Ideal::new(&r, g), keep).unwrap();
        let got = e.reduced_generators().unwrap();
        let target = e.ring().clone();
        let want: Vec<Polynomial> = Ideal::new(&target, expected.iter().map(|t| poly(&target, t)).collect())
            .reduced_generators()
            .unwrap();
        assert_eq!(got, want, "{gens:?}");
        for h in &got {
            assert!(h.support().iter().all(|&i| keep.contains(&target.name(i))));
        }
    }
}

/// `{x,{y,z}} + {y,{z,x}} + {z,{x,y}}` expanded by hand for the linear
/// structure `{x,y} = y`, `{y,z} = z`, `{z,x} = x`:
/// `{x,z} + {y,x} + {z,y} = -x - y - z`.
#[test]
fn cyclic_linear_structure_fails_jacobi() {
    let a = PresentedAlgebra::parse("k3", &["x", "y", "z"], &[]).unwrap();
    let p = PoissonStructure::from_brackets(&a, &[("x", "y", "y"), ("y", "z", "z"), ("z", "x", "x")]).unwrap();
    let (x, y, z) = (a.var("x").unwrap(), a.var("y").unwrap(), a.var("z").unwrap());
    let cyc = &(&p.bracket(&x, &p.bracket(&y, &z).unwrap()).unwrap() + &p.bracket(&y, &p.bracket(&z, &x).unwrap()).unwrap())
        + &p.bracket(&z, &p.bracket(&x, &y).unwrap()).unwrap();
    assert_eq!(cyc, a.element("-x - y - z").unwrap());
    assert!(!check_jacobi(&p).unwrap());
}

#[test]
fn orders_on_two_variables() {
    let x = Monomial(vec![1, 0]);
    let y2 = Monomial(vec![0, 2]);
    assert_eq!(MonomialOrder::Lex.cmp(&x, &y2), std::cmp::Ordering::Greater);
    assert_eq!(MonomialOrder::GrevLex.cmp(&x, &y2), std::cmp::Ordering::Less);
    assert!(Q::zero().is_zero());
}

