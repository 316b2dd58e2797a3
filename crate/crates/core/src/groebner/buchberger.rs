//! Buchberger's algorithm with the Gebauer-Moeller pair criteria.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::arith::{Monomial, MonomialOrder, Polynomial, RingRef, Q};
use crate::error::{Error, Result};

/// Terms sorted descending in the working order.
pub(crate) type Terms = Vec<(Monomial, Q)>;

pub(crate) fn to_terms(p: &Polynomial, order: &MonomialOrder) -> Terms {
    let mut t: Terms = p.terms().to_vec();
    if !matches!(order, MonomialOrder::GrevLex) {
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    }
    t
}

pub(crate) fn from_terms(ring: &RingRef, t: Terms) -> Polynomial {
    Polynomial::from_terms(ring, t)
}

fn make_monic(t: &mut Terms) {
    if let Some((_, c)) = t.first() {
        if !c.is_one() {
            let inv = c.recip();
            for (_, x) in t.iter_mut() {
                *x *= &inv;
            }
        }
    }
}

/// `p[start..] - c * m * g`, merged in `order`.
fn sub_mul(p: &[(Monomial, Q)], g: &[(Monomial, Q)], m: &Monomial, c: &Q, order: &MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut gm: Option<(Monomial, Q)> = None;
    let next_g = |j: usize| -> Option<(Monomial, Q)> { g.get(j).map(|(a, x)| (a.mul(m), -(x * c))) };
    if j < g.len() {
        gm = next_g(j);
    }
    while i < p.len() {
        let Some((gmon, gc)) = gm.as_ref() else { break };
        match order.cmp(&p[i].0, gmon) {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gmon.clone(), gc.clone()));
                j += 1;
                gm = next_g(j);
            }
            Ordering::Equal => {
                let s = &p[i].1 + gc;
                if !s.is_zero() {
                    out.push((p[i].0.clone(), s));
                }
                i += 1;
                j += 1;
                gm = next_g(j);
            }
        }
    }
    out.extend(p[i..].iter().cloned());
    while let Some(t) = gm {
        out.push(t);
        j += 1;
        gm = next_g(j);
    }
    out
}

/// Fully reduce `f` by the monic polynomials `basis` (only those flagged active).
pub(crate) fn reduce(f: Terms, basis: &[Terms], active: &[bool], order: &MonomialOrder) -> Terms {
    let mut p = f;
    let mut rem: Terms = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let (m, c) = &p[start];
        let divisor = basis
            .iter()
            .zip(active)
            .find(|(g, &a)| a && g[0].0.divides(m))
            .map(|(g, _)| g);
        match divisor {
            Some(g) => {
                let q = g[0].0.quotient_of(m);
                let c = c.clone();
                p = sub_mul(&p[start + 1..], &g[1..], &q, &c, order);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn spoly(f: &Terms, g: &Terms, lcm: &Monomial, order: &MonomialOrder) -> Terms {
    let mf = f[0].0.quotient_of(lcm);
    let mg = g[0].0.quotient_of(lcm);
    let a: Terms = f[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    sub_mul(&a, &g[1..], &mg, &Q::one(), order)
}

/// Reduced Groebner basis, monic, sorted by descending leading monomial.
pub(crate) fn buchberger(gens: Vec<Terms>, order: &MonomialOrder, limit: usize) -> Result<Vec<Terms>> {
    let mut polys: Vec<Terms> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<Terms> = gens.into_iter().filter(|t| !t.is_empty()).collect();
    inputs.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    for f in inputs {
        let mut h = reduce(f, &polys, &active, order);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if h[0].0.is_one() {
            return Ok(vec![h]);
        }
        update(&mut polys, &mut active, &mut pairs, h);
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| order.cmp(&pairs[a].lcm, &pairs[b].lcm).then(a.cmp(&b)))
            .unwrap();
        let pair = pairs.swap_remove(best);
        processed += 1;
        if processed > limit {
            return Err(Error::BudgetExceeded {
                pairs: processed - 1,
                limit,
            });
        }
        let s = spoly(&polys[pair.i], &polys[pair.j], &pair.lcm, order);
        let mut h = reduce(s, &polys, &active, order);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if h[0].0.is_one() {
            return Ok(vec![h]);
        }
        update(&mut polys, &mut active, &mut pairs, h);
    }

    let mut basis: Vec<Terms> = polys
        .into_iter()
        .zip(active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    basis.sort_by(|a, b| order.cmp(&b[0].0, &a[0].0));
    // Interreduce tails.
    for k in 0..basis.len() {
        let lead = basis[k][0].clone();
        let tail: Terms = basis[k][1..].to_vec();
        let mut mask = vec![true; basis.len()];
        mask[k] = false;
        let mut reduced = vec![lead];
        reduced.extend(reduce(tail, &basis, &mask, order));
        basis[k] = reduced;
    }
    Ok(basis)
}

fn update(polys: &mut Vec<Terms>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: Terms) {
    let hn = polys.len();
    let lh = h[0].0.clone();

    let mut cands: Vec<(usize, Monomial, bool)> = (0..hn)
        .filter(|&g| active[g])
        .map(|g| {
            let lg = &polys[g][0].0;
            (g, lh.lcm(lg), lh.coprime(lg))
        })
        .collect();

    // Chain criterion among new pairs; keep coprime ones so they can shadow others.
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    for idx in 0..cands.len() {
        let (g, ref l, coprime) = cands[idx];
        let shadowed = !coprime
            && (cands[idx + 1..].iter().any(|(_, l2, _)| l2.divides(l))
                || kept.iter().any(|(_, l2, _)| l2.divides(l)));
        if !shadowed {
            kept.push((g, l.clone(), coprime));
        }
    }
    cands.clear();
    // Drop equal-lcm duplicates, preferring a coprime representative.
    let mut new_pairs: Vec<Pair> = Vec::new();
    let mut seen: Vec<Monomial> = Vec::new();
    kept.sort_by(|a, b| b.2.cmp(&a.2));
    for (g, l, coprime) in kept {
        if seen.contains(&l) {
            continue;
        }
        seen.push(l.clone());
        if !coprime {
            new_pairs.push(Pair { i: g, j: hn, lcm: l });
        }
    }

    // Old pairs made redundant by h.
    pairs.retain(|p| {
        if !lh.divides(&p.lcm) {
            return true;
        }
        let li = lh.lcm(&polys[p.i][0].0);
        let lj = lh.lcm(&polys[p.j][0].0);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(new_pairs);

    for g in 0..hn {
        if active[g] && lh.divides(&polys[g][0].0) {
            active[g] = false;
        }
    }
    polys.push(h);
    active.push(true);
}
