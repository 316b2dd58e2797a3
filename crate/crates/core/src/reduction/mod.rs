//! Degree-bounded invariants, the reduced scheme `Spec k[μ⁻¹(S)]^H`, its
//! induced Poisson bracket, residual actions and composition.

mod compose;
pub mod linear;
mod residual;

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{restrict_action, GroupoidAction};
use crate::algebra::{AlgebraMorphism, PresentedAlgebra};
use crate::arith::{q, Monomial, Polynomial, Ring, RingRef, Q};
use crate::check::{CheckReport, Witness};
use crate::error::{Error, Result};
use crate::groebner::SubalgebraOracle;
use crate::groupoid::{Subgroupoid, SymplecticGroupoid};
use crate::poisson::{jacobi_witness, PoissonStructure};

pub use compose::{
    compose_hamiltonian_schemes, presentation_isomorphism, unit_bimodule, unit_isomorphism, Bimodule,
    Composition, PresentationIsomorphism,
};
pub use residual::{residual_action, Residual};

/// Default cap on closure-loop extensions.
pub const CLOSURE_CAP: usize = 8;

/// Decides `A*f = 1⊗f` for functions on a module: both sides are mapped into
/// `check` and compared by normal form.
#[derive(Clone, Debug)]
pub struct InvarianceTest {
    pub module: PresentedAlgebra,
    pub check: PresentedAlgebra,
    pub act: AlgebraMorphism,
    pub right: AlgebraMorphism,
}

impl InvarianceTest {
    pub fn from_action(a: &GroupoidAction) -> Result<Self> {
        Ok(InvarianceTest {
            module: a.module.clone(),
            check: a.coproduct.algebra.clone(),
            act: a.act.clone(),
            right: a.coproduct.right_inclusion()?,
        })
    }

    pub fn residue(&self, f: &Polynomial) -> Result<Polynomial> {
        let d = self.act.apply_raw(f)?.try_sub(&self.right.apply_raw(f)?)?;
        self.check.normal_form(&d)
    }

    pub fn is_invariant(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.residue(f)?.is_zero())
    }
}

/// A Hamiltonian action together with the data to reduce it at `H ⇉ S`.
#[derive(Clone, Debug)]
pub struct ReductionSetup {
    pub action: GroupoidAction,
    pub symplectic: SymplecticGroupoid,
    pub poisson: PoissonStructure,
    pub stabilizer: Subgroupoid,
}

/// How the invariance condition on `μ⁻¹(S)` is set up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Restrict the action to `H ⇉ S` and take invariants of the restriction.
    RestrictFirst,
    /// Pass to `k[M]/<μ*I_S>` and test `G`-invariance there, comparing in
    /// `k[G] ⊗_{k[X]} k[M]` modulo the fibre on both legs. Requires `H` to be
    /// the full restriction `G|_S`.
    QuotientFirst,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::RestrictFirst => "restrict-first",
            Route::QuotientFirst => "quotient-first",
        }
    }
}

/// Pullback of the base ideal of `setup.stabilizer` along the moment.
pub fn fiber_generators(setup: &ReductionSetup) -> Result<Vec<Polynomial>> {
    setup
        .stabilizer
        .base_ideal
        .generators()
        .iter()
        .map(|f| setup.action.moment.apply_raw(f))
        .collect()
}

pub fn fiber_invariance(setup: &ReductionSetup, route: Route) -> Result<InvarianceTest> {
    match route {
        Route::RestrictFirst => InvarianceTest::from_action(&restrict_action(&setup.action, &setup.stabilizer)?),
        Route::QuotientFirst => {
            let a = &setup.action;
            let g = &a.groupoid;
            let h = &setup.stabilizer;
            let is = h.base_ideal.generators();
            let mut full = Vec::new();
            for f in is {
                full.push(g.src.apply_raw(f)?);
                full.push(g.tgt.apply_raw(f)?);
            }
            let restricted = g.total.relations().extend(full.iter().cloned());
            let given = g.total.relations().extend(h.total_ideal.generators().iter().cloned());
            if !restricted.same_ideal(&given)? {
                return Err(Error::Invalid(format!(
                    "{} is not the full restriction of {} to its base; use the restrict-first route",
                    h.label, g.label
                )));
            }
            let fiber = fiber_generators(setup)?;
            let module = a.module.quotient_by(format!("{}|{}", a.module.label(), h.label), &fiber)?;
            let c = &a.coproduct;
            let mut extra = Vec::new();
            for f in &fiber {
                extra.push(c.right(f)?);
            }
            for f in &full {
                extra.push(c.left(f)?);
            }
            let check = c.algebra.quotient_by(format!("{} mod fibre", c.algebra.label()), &extra)?;
            Ok(InvarianceTest {
                act: AlgebraMorphism::new(&module, &check, a.act.images().to_vec())?,
                right: AlgebraMorphism::new(&module, &check, c.right_inclusion()?.images().to_vec())?,
                module,
                check,
            })
        }
    }
}

/// Invariants of total degree at most `degree_bound`.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub test: InvarianceTest,
    pub degree_bound: u32,
    /// Invariants whose leading standard monomial has the given degree; their
    /// span together with lower degrees is the full solution space.
    pub per_degree: Vec<(u32, Vec<Polynomial>)>,
    /// Algebra generators, pruned.
    pub generators: Vec<(String, Polynomial)>,
}

impl InvariantBasis {
    pub fn dimensions(&self) -> Vec<(u32, usize)> {
        self.per_degree.iter().map(|(d, v)| (*d, v.len())).collect()
    }
}

/// Tag names `a, b, c, ...`, then `y1, y2, ...`, avoiding `taken`.
#[derive(Clone, Debug)]
struct TagNames {
    taken: Vec<String>,
    next: usize,
}

impl TagNames {
    fn new(taken: &[String]) -> Self {
        TagNames {
            taken: taken.to_vec(),
            next: 0,
        }
    }

    fn fresh(&mut self) -> String {
        loop {
            let k = self.next;
            self.next += 1;
            let name = if k < 26 {
                ((b'a' + k as u8) as char).to_string()
            } else {
                format!("y{}", k - 25)
            };
            if !self.taken.contains(&name) {
                self.taken.push(name.clone());
                return name;
            }
        }
    }
}

/// Solve the invariance condition on standard monomials of degree `<= d`
/// and prune to algebra generators.
pub fn invariants_up_to_degree(test: &InvarianceTest, d: u32) -> Result<InvariantBasis> {
    if d == 0 {
        return Err(Error::Invalid("degree bound must be at least 1".into()));
    }
    let module = &test.module;
    let ring = module.ring();
    let rels = module.relations();
    let mut columns: Vec<Monomial> = Vec::new();
    for k in 0..=d {
        columns.extend(rels.standard_monomials(k)?);
    }
    if rels.is_unit()? {
        columns.clear();
    }
    let mut row_of: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (c, m) in columns.iter().enumerate() {
        let f = Polynomial::monomial(ring, m.clone(), q(1));
        for (mono, coeff) in test.residue(&f)?.terms() {
            let r = *row_of.entry(mono.0.clone()).or_insert_with(|| {
                rows.push(vec![q(0); columns.len()]);
                rows.len() - 1
            });
            rows[r][c] = coeff.clone();
        }
    }
    let mut per: BTreeMap<u32, Vec<Polynomial>> = (0..=d).map(|k| (k, Vec::new())).collect();
    let mut free_cols = Vec::new();
    for v in linear::nullspace(rows, columns.len()) {
        let f = Polynomial::from_terms(
            ring,
            columns.iter().zip(&v).filter(|(_, c)| !num_traits::Zero::is_zero(*c)).map(|(m, c)| (m.clone(), c.clone())),
        );
        let lead = v.iter().rposition(|c| !num_traits::Zero::is_zero(c)).unwrap_or(0);
        free_cols.push(lead);
        per.get_mut(&columns[lead].degree()).expect("degree in range").push(f);
    }
    let mut names = TagNames::new(ring.names());
    let mut generators: Vec<(String, Polynomial)> = Vec::new();
    for k in 1..=d {
        for f in &per[&k] {
            if express_in(module, &generators, f)?.is_none() {
                generators.push((names.fresh(), f.clone()));
            }
        }
    }
    Ok(InvariantBasis {
        test: test.clone(),
        degree_bound: d,
        per_degree: per.into_iter().collect(),
        generators,
    })
}

fn express_in(module: &PresentedAlgebra, tags: &[(String, Polynomial)], f: &Polynomial) -> Result<Option<Polynomial>> {
    SubalgebraOracle::new(module.relations(), tags, &[])?.express(f)
}

/// `k[y]/J` with `J` the kernel of `y_i ↦ g_i`, and the evaluation morphism
/// into the module.
pub fn present_reduced(inv: &InvariantBasis) -> Result<(PresentedAlgebra, AlgebraMorphism)> {
    let (alg, proj, _) = present(&inv.test.module, &inv.generators)?;
    Ok((alg, proj))
}

fn present(
    module: &PresentedAlgebra,
    generators: &[(String, Polynomial)],
) -> Result<(PresentedAlgebra, AlgebraMorphism, SubalgebraOracle)> {
    let oracle = SubalgebraOracle::new(module.relations(), generators, &[])?;
    let rels = oracle.relations()?;
    let ring = rels.ring().clone();
    let alg = PresentedAlgebra::new("reduced", &ring, rels.generators().to_vec());
    let proj = AlgebraMorphism::new(&alg, module, generators.iter().map(|(_, g)| g.clone()).collect())?;
    Ok((alg, proj, oracle))
}

/// One extension of the generator set made by the closure loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureStep {
    pub pair: (String, String),
    pub tag: String,
    pub element: Polynomial,
}

/// `M//(S,H)G` with its bracket.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub reduced: PresentedAlgebra,
    pub reduced_poisson: PoissonStructure,
    /// `y_i ↦ g_i` into `k[μ⁻¹(S)]`.
    pub projection: AlgebraMorphism,
    pub generators: Vec<(String, Polynomial)>,
    /// Representatives of the generators in `k[M]`.
    pub lifts: Vec<Polynomial>,
    pub fiber: PresentedAlgebra,
    pub ambient_poisson: PoissonStructure,
    pub invariance: InvarianceTest,
    pub closure_log: Vec<ClosureStep>,
    pub degree_bound: u32,
    pub dimensions: Vec<(u32, usize)>,
}

impl ReductionResult {
    pub fn tags(&self) -> Vec<String> {
        self.generators.iter().map(|(t, _)| t.clone()).collect()
    }

    /// Text of the presentation, e.g. `k[a, b, c]/<a^2 - b*c>`.
    pub fn presentation(&self) -> String {
        let rels: Vec<String> = self.reduced.relations().generators().iter().map(|p| p.to_string()).collect();
        let vars = self.reduced.ring().names().join(", ");
        if rels.is_empty() {
            format!("k[{vars}]")
        } else {
            format!("k[{vars}]/<{}>", rels.join(", "))
        }
    }

    pub fn bracket_entries(&self) -> Vec<(String, String, Polynomial)> {
        let names = self.reduced.ring().names();
        self.reduced_poisson
            .nonzero_entries()
            .into_iter()
            .map(|(i, j, p)| (names[i].clone(), names[j].clone(), p.clone()))
            .collect()
    }
}

impl PartialEq for ReductionResult {
    fn eq(&self, other: &Self) -> bool {
        self.reduced.ring().names() == other.reduced.ring().names()
            && self.reduced.relations().generators() == other.reduced.relations().generators()
            && self.reduced_poisson.matrix() == other.reduced_poisson.matrix()
            && self.generators == other.generators
            && self.lifts == other.lifts
            && self.closure_log == other.closure_log
            && self.dimensions == other.dimensions
    }
}

impl fmt::Display for ReductionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "presentation: {}", self.presentation())?;
        for (t, g) in &self.generators {
            writeln!(f, "  {t} = {g}")?;
        }
        for (a, b, p) in self.bracket_entries() {
            writeln!(f, "  {{{a}, {b}}} = {p}")?;
        }
        for s in &self.closure_log {
            writeln!(f, "  closure: {{{}, {}}} added as {} = {}", s.pair.0, s.pair.1, s.tag, s.element)?;
        }
        Ok(())
    }
}

/// Bracket the lifts, project, and re-express in the generators; brackets
/// that escape the subalgebra are appended as new generators (at most `cap`).
pub fn reduced_bracket(inv: &InvariantBasis, pm: &PoissonStructure, cap: usize) -> Result<ReductionResult> {
    let module = &inv.test.module;
    Ring::check_same(pm.algebra().ring(), module.ring())?;
    let mut generators = inv.generators.clone();
    let mut taken: Vec<String> = module.ring().names().to_vec();
    taken.extend(generators.iter().map(|(t, _)| t.clone()));
    let mut names = TagNames::new(&taken);
    let mut log: Vec<ClosureStep> = Vec::new();
    'closure: loop {
        let (alg, proj, oracle) = present(module, &generators)?;
        let n = generators.len();
        let mut matrix = vec![vec![alg.zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = module.normal_form(&pm.bracket_raw(&generators[i].1, &generators[j].1)?)?;
                match oracle.express(&b)? {
                    Some(e) => {
                        let e = alg.normal_form(&e.embed(alg.ring())?)?;
                        matrix[j][i] = -&e;
                        matrix[i][j] = e;
                    }
                    None => {
                        if log.len() >= cap {
                            return Err(Error::ClosureCap {
                                rounds: cap,
                                element: b.to_string(),
                            });
                        }
                        let tag = names.fresh();
                        log.push(ClosureStep {
                            pair: (generators[i].0.clone(), generators[j].0.clone()),
                            tag: tag.clone(),
                            element: b.clone(),
                        });
                        generators.push((tag, b));
                        continue 'closure;
                    }
                }
            }
        }
        let reduced_poisson = PoissonStructure::new(&alg, matrix)?;
        if let Some(w) = jacobi_witness(&reduced_poisson)? {
            return Err(Error::Invalid(format!("reduced bracket violates Jacobi at {w}")));
        }
        return Ok(ReductionResult {
            lifts: generators.iter().map(|(_, g)| g.clone()).collect(),
            reduced: alg,
            reduced_poisson,
            projection: proj,
            generators,
            fiber: module.clone(),
            ambient_poisson: pm.clone(),
            invariance: inv.test.clone(),
            closure_log: log,
            degree_bound: inv.degree_bound,
            dimensions: inv.dimensions(),
        });
    }
}

/// Invariants, presentation and bracket in one go.
pub fn reduce(setup: &ReductionSetup, route: Route, d: u32, cap: usize) -> Result<ReductionResult> {
    let test = fiber_invariance(setup, route)?;
    let inv = invariants_up_to_degree(&test, d)?;
    reduced_bracket(&inv, &setup.poisson, cap)
}

/// Preconditions of the reduction theorem that can be checked mechanically.
pub fn check_reduction_setup(setup: &ReductionSetup) -> Result<CheckReport> {
    let mut r = CheckReport::new();
    r.absorb("action", crate::action::check_action(&setup.action)?);
    r.absorb(
        "hamiltonian",
        crate::action::check_hamiltonian(&setup.action, &setup.symplectic, &setup.poisson)?.to_report(),
    );
    r.absorb(
        "stabilizer",
        crate::groupoid::check_subgroupoid(&setup.stabilizer, Some(&setup.symplectic))?,
    );
    Ok(r)
}

fn random_ideal_element(rng: &mut ChaCha8Rng, basis: &[Polynomial], ring: &RingRef) -> Polynomial {
    let mut out = Polynomial::zero(ring);
    if basis.is_empty() {
        return out;
    }
    for _ in 0..2 {
        let g = &basis[rng.gen_range(0..basis.len())];
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        let v = rng.gen_range(0..=ring.len());
        let m = if v == ring.len() { Monomial::one(ring.len()) } else { Monomial::var(ring.len(), v) };
        out = &out + &g.mul_term(&m, &q(c));
    }
    out
}

/// Randomized evidence that the reduced bracket is the one induced by the
/// ambient bracket: (a) independence of lifts, (b) brackets of invariants are
/// invariant, (c) lifts preserve the fibre ideal, (d) Jacobi. A fifth item
/// re-checks the defining identity on generator pairs exactly.
pub fn verify_reduction(r: &ReductionResult, trials: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fiber = &r.fiber;
    let pm = &r.ambient_poisson;
    let ring = fiber.ring();
    let oracle = SubalgebraOracle::new(fiber.relations(), &r.generators, &[])?;
    let names = r.tags();
    let n = r.lifts.len();
    let basis = fiber.relations().basis()?.polynomials().to_vec();

    let compare = |lifts: &[Polynomial]| -> Result<Option<(usize, usize, String)>> {
        for i in 0..n {
            for j in i + 1..n {
                let b = fiber.normal_form(&pm.bracket_raw(&lifts[i], &lifts[j])?)?;
                let Some(e) = oracle.express(&b)? else {
                    return Ok(Some((i, j, format!("{b} outside the subalgebra"))));
                };
                let d = r.reduced.normal_form(&e.embed(r.reduced.ring())?.try_sub(r.reduced_poisson.entry(i, j))?)?;
                if !d.is_zero() {
                    return Ok(Some((i, j, d.to_string())));
                }
            }
        }
        Ok(None)
    };

    let mut report = CheckReport::new();
    let mut wa = None;
    for t in 0..trials {
        let lifts: Vec<Polynomial> = r
            .lifts
            .iter()
            .map(|f| f + &random_ideal_element(&mut rng, &basis, ring))
            .collect();
        if let Some((i, j, res)) = compare(&lifts)? {
            wa = Some(Witness::new(format!("trial {t}, {{{}, {}}}", names[i], names[j]), res));
            break;
        }
    }
    report.record("(a) lift independence", wa);

    let mut wb = None;
    'b: for i in 0..n {
        for j in i + 1..n {
            let b = fiber.normal_form(&pm.bracket_raw(&r.lifts[i], &r.lifts[j])?)?;
            let res = r.invariance.residue(&b)?;
            if !res.is_zero() {
                wb = Some(Witness::new(format!("{{{}, {}}}", names[i], names[j]), res));
                break 'b;
            }
        }
    }
    report.record("(b) brackets of invariants are invariant", wb);

    let mut wc = None;
    'c: for (i, f) in r.lifts.iter().enumerate() {
        for h in fiber.relations().generators() {
            let res = fiber.normal_form(&pm.bracket_raw(f, h)?)?;
            if !res.is_zero() {
                wc = Some(Witness::new(format!("{{{}, {h}}}", names[i]), res));
                break 'c;
            }
        }
    }
    report.record("(c) lifts preserve the fibre ideal", wc);
    report.record("(d) Jacobi identity", jacobi_witness(&r.reduced_poisson)?);
    report.record(
        "projection matches lifted brackets",
        compare(&r.lifts)?.map(|(i, j, res)| Witness::new(format!("{{{}, {}}}", names[i], names[j]), res)),
    );
    Ok(report)
}
