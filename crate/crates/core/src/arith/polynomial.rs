use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::{grevlex, Monomial};
use super::order::MonomialOrder;
use super::ring::{Ring, RingRef};
use super::Q;
use crate::error::{Error, Result};

/// Sparse polynomial with rational coefficients.
///
/// Terms are kept sorted in descending grevlex order with no zero coefficients,
/// so structural equality is mathematical equality.
#[derive(Clone)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, Q)>,
}

/// Which operation [`Polynomial::arith`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

fn desc(a: &Monomial, b: &Monomial) -> Ordering {
    grevlex(b.exps(), a.exps())
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, Q::one())
    }

    pub fn constant(ring: &RingRef, c: Q) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(ring.len()), c)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn integer(ring: &RingRef, c: i64) -> Self {
        Self::constant(ring, Q::from_integer(BigInt::from(c)))
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.len(), i), Q::one())],
        }
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Self> {
        Ok(Self::var(ring, ring.require(name)?))
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Q) -> Self {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Collects like terms, drops zeros, sorts.
    pub fn from_terms<I>(ring: &RingRef, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Q)>,
    {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), ring.len());
            *acc.entry(m).or_insert_with(Q::zero) += c;
        }
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| desc(&a.0, &b.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Caller guarantees sorted, merged, nonzero terms.
    pub(crate) fn from_sorted(ring: &RingRef, terms: Vec<(Monomial, Q)>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn parse(ring: &RingRef, text: &str) -> Result<Self> {
        super::parse::parse_polynomial(ring, text)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Q)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Total degree; zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn leading(&self, order: &MonomialOrder) -> Option<&(Monomial, Q)> {
        if matches!(order, MonomialOrder::GrevLex) {
            return self.terms.first();
        }
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.ring.len()];
        for (m, _) in &self.terms {
            for i in m.support() {
                used[i] = true;
            }
        }
        used.iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn arith(&self, other: &Polynomial, op: ArithOp) -> Result<Polynomial> {
        Ring::check_same(&self.ring, &other.ring)?;
        Ok(match op {
            ArithOp::Add => self.merge(other, false),
            ArithOp::Sub => self.merge(other, true),
            ArithOp::Mul => self.product(other),
        })
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.arith(other, ArithOp::Add)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.arith(other, ArithOp::Mul)
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match desc(&a[i].0, &b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -t.1.clone() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial::from_sorted(&self.ring, out)
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| desc(&a.0, &b.0));
        Polynomial::from_sorted(&self.ring, terms)
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial::from_sorted(
            &self.ring,
            self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        )
    }

    /// Multiply by `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        // Multiplying by a monomial preserves any monomial order.
        Polynomial::from_sorted(
            &self.ring,
            self.terms.iter().map(|(a, x)| (a.mul(m), x * c)).collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] > 0)
            .map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e[i];
                e[i] -= 1;
                (Monomial(e), c * Q::from_integer(BigInt::from(k)))
            });
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Image under `x_i -> images[i]`; every image must live over `target`.
    pub fn substitute(&self, images: &[Polynomial], target: &RingRef) -> Result<Polynomial> {
        if images.len() != self.ring.len() {
            let missing = self.ring.names().get(images.len()).cloned().unwrap_or_default();
            return Err(Error::MissingImage(missing));
        }
        for img in images {
            Ring::check_same(img.ring(), target)?;
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); images.len()];
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(images[i].clone());
                }
                while cache.len() < e as usize {
                    let next = cache.last().unwrap().product(&images[i]);
                    cache.push(next);
                }
                term = term.product(&cache[e as usize - 1]);
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                *acc.entry(tm).or_insert_with(Q::zero) += tc;
            }
        }
        Ok(Polynomial::from_terms(target, acc))
    }

    /// Substitution by variable name; every variable that occurs needs an image.
    pub fn substitute_named(
        &self,
        images: &HashMap<String, Polynomial>,
        target: &RingRef,
    ) -> Result<Polynomial> {
        let mut list = Vec::with_capacity(self.ring.len());
        let used = self.support();
        for (i, name) in self.ring.names().iter().enumerate() {
            match images.get(name) {
                Some(p) => list.push(p.clone()),
                None if used.contains(&i) => return Err(Error::MissingImage(name.clone())),
                None => list.push(Polynomial::zero(target)),
            }
        }
        self.substitute(&list, target)
    }

    /// Move to `target`, sending variable `v` to the variable named `rename(v)`.
    pub fn rename_into<F>(&self, target: &RingRef, rename: F) -> Result<Polynomial>
    where
        F: Fn(&str) -> String,
    {
        let map: Vec<usize> = self
            .ring
            .names()
            .iter()
            .map(|n| target.require(&rename(n)))
            .collect::<Result<_>>()?;
        let n = target.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; n];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            (Monomial(e), c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Move to a ring containing variables of the same names, failing only on
    /// variables that actually occur.
    pub fn embed(&self, target: &RingRef) -> Result<Polynomial> {
        if Ring::same(&self.ring, target) {
            return Ok(Polynomial::from_sorted(target, self.terms.clone()));
        }
        let used = self.support();
        let mut map = vec![usize::MAX; self.ring.len()];
        for &i in &used {
            map[i] = target.require(self.ring.name(i))?;
        }
        let n = target.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; n];
            for &i in &used {
                e[map[i]] += m.0[i];
            }
            (Monomial(e), c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Multiply so that the leading (grevlex) coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Compare by canonical storage order: first differing term decides.
    pub fn compare(&self, other: &Polynomial) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match desc(&a.0, &b.0).reverse() {
                Ordering::Equal => {}
                o => return o,
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        Ring::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ring.names().hash(state);
        self.terms.hash(state);
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, ring: &Ring, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", ring.name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, &self.ring, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

// Operators panic on mismatched rings; use `arith` for a fallible version.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition over different rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction over different rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication over different rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_sorted(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        )
    }
}
