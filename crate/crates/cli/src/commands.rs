//! Command dispatch: pick entities from a session, run the engine, fill a report.

use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use coisored_core::action::{check_action, check_commuting, check_hamiltonian, graph_ideal, GroupoidAction};
use coisored_core::algebra::AlgebraMorphism;
use coisored_core::check::{CheckReport, Witness};
use coisored_core::groebner::{set_budget, DEFAULT_BUDGET};
use coisored_core::groupoid::{check_groupoid_axioms, check_subgroupoid, check_symplectic, nondegeneracy_certificate, SymplecticGroupoid};
use coisored_core::poisson::PoissonStructure;
use coisored_core::reduction::{
    check_reduction_setup, compose_hamiltonian_schemes, invariants_up_to_degree, reduce, residual_action,
    unit_isomorphism, verify_reduction, Bimodule, InvarianceTest, ReductionResult, ReductionSetup, Route,
    CLOSURE_CAP,
};
use coisored_core::Error as CoreError;

use crate::emit;
use crate::report::{Failure, Outcome, Report};
use crate::session::{parse_session, Entity, Kind, Session};

/// Environment variable overriding the default S-pair budget.
pub const BUDGET_ENV: &str = "COISORED_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    CheckGroupoid,
    CheckSymplectic,
    CheckAction,
    CheckHamiltonian,
    Invariants,
    Reduce,
    Residual,
    Compose,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckGroupoid => "check-groupoid",
            Command::CheckSymplectic => "check-symplectic",
            Command::CheckAction => "check-action",
            Command::CheckHamiltonian => "check-hamiltonian",
            Command::Invariants => "invariants",
            Command::Reduce => "reduce",
            Command::Residual => "residual",
            Command::Compose => "compose",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    RestrictFirst,
    QuotientFirst,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::RestrictFirst => Route::RestrictFirst,
            RouteArg::QuotientFirst => Route::QuotientFirst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub degree_bound: u32,
    pub order: String,
    pub seed: u64,
    pub verify_trials: usize,
    pub budget: usize,
    pub closure_cap: usize,
    pub route: RouteArg,
    pub timing: bool,
    pub groupoid: Option<String>,
    pub action: Option<String>,
    pub residual: Option<String>,
    pub subgroupoid: Option<String>,
    pub bimodules: Vec<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            degree_bound: 4,
            order: "grevlex".into(),
            seed: 0,
            verify_trials: 10,
            budget: DEFAULT_BUDGET,
            closure_cap: CLOSURE_CAP,
            route: RouteArg::RestrictFirst,
            timing: false,
            groupoid: None,
            action: None,
            residual: None,
            subgroupoid: None,
            bimodules: Vec::new(),
        }
    }
}

impl Options {
    /// The budget default, honouring the environment override.
    pub fn default_budget() -> Result<usize, String> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("{BUDGET_ENV} must be a positive integer, got `{v}`")),
            Err(_) => Ok(DEFAULT_BUDGET),
        }
    }

    /// Options echoed in reports. The route is left out: both routes must
    /// produce the same report.
    fn echo(&self) -> Vec<(String, String)> {
        let mut v = vec![
            ("degree-bound".to_string(), self.degree_bound.to_string()),
            ("order".to_string(), self.order.clone()),
            ("seed".to_string(), self.seed.to_string()),
            ("verify-trials".to_string(), self.verify_trials.to_string()),
            ("budget".to_string(), self.budget.to_string()),
            ("closure-cap".to_string(), self.closure_cap.to_string()),
        ];
        for (k, val) in [
            ("groupoid", &self.groupoid),
            ("action", &self.action),
            ("residual", &self.residual),
            ("subgroupoid", &self.subgroupoid),
        ] {
            if let Some(x) = val {
                v.push((k.to_string(), x.clone()));
            }
        }
        for b in &self.bimodules {
            v.push(("bimodule".to_string(), b.clone()));
        }
        v
    }
}

/// Why a command stopped early.
enum Stop {
    Input(String),
    Core(CoreError),
}

impl From<CoreError> for Stop {
    fn from(e: CoreError) -> Self {
        Stop::Core(e)
    }
}

type Run<T> = std::result::Result<T, Stop>;

fn input<T>(msg: impl Into<String>) -> Run<T> {
    Err(Stop::Input(msg.into()))
}

/// Parse the session at `path` and run `cmd` on it.
pub fn run_command(cmd: Command, path: &Path, opts: &Options) -> Report {
    let start = Instant::now();
    let mut report = Report::new(cmd.name(), &path.display().to_string(), opts.echo());
    let outcome = (|| -> Run<()> {
        if opts.order != "grevlex" {
            return input(format!("unsupported monomial order `{}`; only grevlex is available", opts.order));
        }
        if opts.degree_bound == 0 {
            return input("--degree-bound must be at least 1");
        }
        set_budget(opts.budget);
        let session = parse_session(path).map_err(|e| Stop::Input(format!("{}: {e}", path.display())))?;
        dispatch(cmd, &session, opts, &mut report)
    })();
    if let Err(stop) = outcome {
        report.failure = Some(match stop {
            Stop::Input(message) => Failure {
                kind: Outcome::InputError,
                message,
            },
            Stop::Core(e) => Failure {
                kind: match e {
                    CoreError::BudgetExceeded { .. } | CoreError::ClosureCap { .. } => Outcome::Budget,
                    _ => Outcome::InputError,
                },
                message: e.to_string(),
            },
        });
    }
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    report
}

fn dispatch(cmd: Command, s: &Session, opts: &Options, r: &mut Report) -> Run<()> {
    match cmd {
        Command::CheckGroupoid => check_groupoid_cmd(s, opts, r),
        Command::CheckSymplectic => check_symplectic_cmd(s, opts, r),
        Command::CheckAction => check_action_cmd(s, opts, r),
        Command::CheckHamiltonian => check_hamiltonian_cmd(s, opts, r),
        Command::Invariants => invariants_cmd(s, opts, r),
        Command::Reduce => reduce_cmd(s, opts, r),
        Command::Residual => residual_cmd(s, opts, r),
        Command::Compose => compose_cmd(s, opts, r),
    }
}

fn absorb(r: &mut Report, prefix: Option<&str>, checks: CheckReport) {
    for mut it in checks.items {
        if let Some(p) = prefix {
            it.name = format!("{p}/{}", it.name);
        }
        r.checks.push(it);
    }
}

/// The entity named by `flag`, or the only one of its kind.
fn pick<'a>(s: &'a Session, kind: Kind, flag: Option<&str>, option: &str) -> Run<(&'a str, &'a Entity)> {
    match flag {
        Some(name) => match s.get(name) {
            Some(d) if d.entity.kind() == kind => Ok((d.name.as_str(), &d.entity)),
            Some(d) => input(format!("`{name}` is a {}, expected a {kind}", d.entity.kind())),
            None => input(format!("no {kind} named `{name}` in the session")),
        },
        None => {
            let names = s.names_of(kind);
            match names.as_slice() {
                [one] => Ok((one, &s.get(one).expect("listed").entity)),
                [] => input(format!("the session declares no {kind}")),
                _ => input(format!(
                    "the session declares several {kind} entities ({}); choose one with --{option}",
                    names.join(", ")
                )),
            }
        }
    }
}

fn symplectic_of<'a>(s: &'a Session, groupoid: &str) -> Run<&'a SymplecticGroupoid> {
    match s.get(groupoid).map(|d| &d.entity) {
        Some(Entity::Groupoid {
            symplectic: Some(sg), ..
        }) => Ok(sg),
        _ => input(format!("groupoid `{groupoid}` has no Poisson structures (set `poisson` and `base_poisson`)")),
    }
}

fn poisson_of<'a>(s: &'a Session, action: &str, poisson: &Option<String>) -> Run<&'a PoissonStructure> {
    match poisson.as_deref().and_then(|p| s.get(p)).map(|d| &d.entity) {
        Some(Entity::Poisson(p)) => Ok(p),
        _ => input(format!("action `{action}` has no Poisson structure on its module (set `poisson = ...`)")),
    }
}

struct ActionRef<'a> {
    name: &'a str,
    action: &'a GroupoidAction,
    groupoid: &'a str,
    poisson: &'a Option<String>,
}

fn action_ref<'a>(s: &'a Session, flag: Option<&str>, option: &str) -> Run<ActionRef<'a>> {
    let (name, e) = pick(s, Kind::Action, flag, option)?;
    let Entity::Action { groupoid, poisson, action } = e else { unreachable!() };
    Ok(ActionRef {
        name,
        action,
        groupoid,
        poisson,
    })
}

fn morphism_table(m: &AlgebraMorphism) -> Vec<String> {
    m.source()
        .ring()
        .names()
        .iter()
        .zip(m.images())
        .map(|(v, p)| format!("{v} -> {p}"))
        .collect()
}

fn check_groupoid_cmd(s: &Session, opts: &Options, r: &mut Report) -> Run<()> {
    let (name, e) = pick(s, Kind::Groupoid, opts.groupoid.as_deref(), "groupoid")?;
    let Entity::Groupoid { groupoid, symplectic } = e else { unreachable!() };
    absorb(r, None, check_groupoid_axioms(groupoid)?);
    for d in &s.declarations {
        if let Entity::Subgroupoid { groupoid: parent, sub } = &d.entity {
            if parent == name {
                absorb(r, Some(&format!("subgroupoid {}", d.name)), check_subgroupoid(sub, symplectic.as_ref())?);
            }
        }
    }
    r.push_text("groupoid", name);
    r.push_text("base", groupoid.base.ring().names().join(", "));
    r.push_text("total", groupoid.total.ring().names().join(", "));
    Ok(())
}

fn check_symplectic_cmd(s: &Session, opts: &Options, r: &mut Report) -> Run<()> {
    let (name, _) = pick(s, Kind::Groupoid, opts.groupoid.as_deref(), "groupoid")?;
    let sg = symplectic_of(s, name)?;
    absorb(r, None, check_symplectic(sg)?);
    r.push_text("groupoid", name);
    if let Ok(minor) = nondegeneracy_certificate(&sg.total_poisson)? {
        r.push_text("nondegenerate minor", minor.join(", "));
    }
    Ok(())
}

fn check_action_cmd(s: &Session, opts: &Options, r: &mut Report) -> Run<()> {
    let a = action_ref(s, opts.action.as_deref(), "action")?;
    absorb(r, None, check_action(a.action)?);
    r.push_text("action", a.name);
    r.push_list("moment", morphism_table(&a.action.moment));
    r.push_list("act", morphism_table(&a.action.act));
    Ok(())
}

fn check_hamiltonian_cmd(s: &Session, opts: &Options, r: &mut Report) -> Run<()> {
    let a = action_ref(s, opts.action.as_deref(), "action")?;
    let sg = symplectic_of(s, a.groupoid)?;
    let pm = poisson_of(s, a.name, a.poisson)?;
    let h = check_hamiltonian(a.action, sg, pm)?;
    absorb(r, None, h.to_report());
    let yes_no = |b: bool| if b { "pass" } else { "fail" }.to_string();
    r.push_text("action", a.name);
    r.push_text("graph coisotropy", yes_no(h.verdict()));
    r.push_text("conditions (i) and (ii)", yes_no(h.conditions()));
    r.push_text("verdicts agree", if h.verdict() == h.conditions() { "yes" } else { "no" });
    let g = graph_ideal(a.action, &sg.total_poisson, pm)?;
    r.push_list("graph ideal", g.defining.iter().map(|p| p.to_string()).collect());
    Ok(())
}

fn invariants_cmd(s: &Session, opts: &Options, r: &mut Report) -> Run<()> {
    let a = action_ref(s, opts.action.as_deref(), "action")?;
    let test = InvarianceTest::from_action(a.action)?;
    let inv = invariants_up_to_degree(&test, opts.degree_bound)?;
    let mut gens = None;
    for (t, g) in &inv.generators {
        if !test.is_invariant(g)? {
            gens.get_or_insert(Witness::new(t.clone(), test.residue(g)?));
        }
    }
    let mut products = None;
    'outer: for (i, (ti, gi)) in inv.generators.iter().enumerate() {
        for (tj, gj) in &inv.generators[i..] {
            let p = gi.try_mul(gj)?;
            if !test.is_invariant(&p)? {
                products = Some(Witness::new(format!("{ti}*{tj}"), test.residue(&p)?));
                break 'outer;
            }
        }
    }
    r.checks.extend(
        [("generators are invariant", gens), ("products of generators are invariant", products)]
            .into_iter()
            .map(|(n, w)| coisored_core::check::CheckItem {
                name: n.into(),
                passed: w.is_none(),
                witness: w,
            }),
    );
    r.push_text("action", a.name);
    r.push_list(
        "dimensions",
        inv.dimensions().iter().map(|(d, n)| format!("degree {d}: {n}")).collect(),
    );
    r.push_list("generators", inv.generators.iter().map(|(t, g)| format!("{t} = {g}")).collect());
    Ok(())
}

fn reduction_setup(s: &Session, a: &ActionRef<'_>, sub_flag: Option<&str>) -> Run<(ReductionSetup, bool)> {
    let sg = symplectic_of(s, a.groupoid)?;
    let pm = poisson_of(s, a.name, a.poisson)?;
    let sub = match sub_flag {
        Some(_) => pick(s, Kind::Subgroupoid, sub_flag, "subgroupoid")?.1,
        None => {
            let matching: Vec<&str> = s
                .declarations
                .iter()
                .filter(|d| matches!(&d.entity, Entity::Subgroupoid { groupoid, .. } if groupoid == a.groupoid))
                .map(|d| d.name.as_str())
                .collect();
            match matching.as_slice() {
                [one] => &s.get(one).expect("listed").entity,
                [] => return input(format!("no subgroupoid of `{}` is declared", a.groupoid)),
                _ => {
                    return input(format!(
                        "several subgroupoids of `{}` ({}); choose one with --subgroupoid",
                        a.groupoid,
                        matching.join(", ")
                    ))
                }
            }
        }
    };
    let Entity::Subgroupoid { groupoid, sub } = sub else { unreachable!() };
    if groupoid != a.groupoid {
        return input(format!("subgroupoid `{}` lives in `{groupoid}`, not in `{}`", sub.label, a.groupoid));
    }
    Ok((
        ReductionSetup {
            action: a.action.clone(),
            symplectic: sg.clone(),
            poisson: pm.clone(),
            stabilizer: sub.clone(),
        },
        sub.stabilizer,
    ))
}

fn setup_checks(r: &mut Report, setup: &ReductionSetup, asserted: bool) -> Run<bool> {
    let c = check_reduction_setup(setup)?;
    let ok = c.passed() && asserted;
    absorb(r, None, c);
    r.checks.push(coisored_core::check::CheckItem {
        name: "stabilizer/asserted in the session".into(),
        passed: asserted,
        witness: (!asserted).then(|| Witness::new(setup.stabilizer.label.clone(), "stabilizer = false")),
    });
    Ok(ok)
}

fn push_reduction(r: &mut Report, red: &ReductionResult) {
    r.push_text("presentation", red.presentation());
    r.push_list("generators", red.generators.iter().map(|(t, g)| format!("{t} = {g}")).collect());
    r.push_list(
        "brackets",
        red.bracket_entries().iter().map(|(a, b, p)| format!("{{{a}, {b}}} = {p}")).collect(),
    );
    r.push_list(
        "closure",
        red.closure_log
            .iter()
            .map(|c| format!("{{{}, {}}} added as {} = {}", c.pair.0, c.pair.1, c.tag, c.element))
            .collect(),
    );
    r.push_list(
        "dimensions",
        red.dimensions.iter().map(|(d, n)| format!("degree {d}: {n}")).collect(),
    );
    r.push_text(
        "completeness",
        format!("invariants searched up to degree {}; no certificate that this bound suffices", red.degree_bound),
    );
}

fn reduced_entities(red: &ReductionResult) -> String {
    let mut out = emit::ring("reduced", &red.reduced);
    out.push_str(&emit::poisson("reduced_bracket", "reduced", &red.reduced_poisson));
    out
}

fn reduce_cmd(s: &Session, opts: &Options, r: &mut Report) -> Run<()> {
    let a = action_ref(s, opts.action.as_deref(), "action")?;
    let (setup, asserted) = reduction_setup(s, &a, opts.subgroupoid.as_deref())?;
    if !setup_checks(r, &setup, asserted)? {
        r.push_text("reduction", "not attempted: preconditions failed");
        return Ok(());
    }
    let red = reduce(&setup, opts.route.into(), opts.degree_bound, opts.closure_cap)?;
    absorb(r, Some("verify"), verify_reduction(&red, opts.verify_trials, opts.seed)?);
    push_reduction(r, &red);
    r.entities = Some(reduced_entities(&red));
    Ok(())
}

fn residual_cmd(s: &Session, opts: &Options, r: &mut Report) -> Run<()> {
    let actions = s.names_of(Kind::Action);
    let (g_flag, i_flag) = match (opts.residual.as_deref(), opts.action.as_deref()) {
        (Some(g), Some(i)) => (g.to_string(), i.to_string()),
        (g, i) if actions.len() == 2 => {
            let g = g.map(str::to_string).unwrap_or_else(|| {
                actions.iter().find(|n| Some(**n) != i).expect("two actions").to_string()
            });
            let i = i.map(str::to_string).unwrap_or_else(|| {
                actions.iter().find(|n| **n != g).expect("two actions").to_string()
            });
            (g, i)
        }
        _ => return input("residual needs two actions; choose them with --residual and --action"),
    };
    let g = action_ref(s, Some(&g_flag), "residual")?;
    let i = action_ref(s, Some(&i_flag), "action")?;
    let g_sg = symplectic_of(s, g.groupoid)?;
    let commuting = check_commuting(g.action, i.action)?;
    let commute = commuting.passed();
    absorb(r, Some("commuting"), commuting);
    if !commute {
        r.push_text("residual action", "not attempted: the actions do not commute");
        return Ok(());
    }
    let (setup, asserted) = reduction_setup(s, &i, opts.subgroupoid.as_deref())?;
    if !setup_checks(r, &setup, asserted)? {
        r.push_text("residual action", "not attempted: preconditions failed");
        return Ok(());
    }
    let res = residual_action(g.action, g_sg, &setup, opts.degree_bound, opts.closure_cap)?;
    absorb(r, Some("residual"), res.report.clone());
    absorb(r, Some("verify"), verify_reduction(&res.reduction, opts.verify_trials, opts.seed)?);
    push_reduction(r, &res.reduction);
    r.push_list("residual moment", morphism_table(&res.action.moment));
    r.push_list("residual act", morphism_table(&res.action.act));
    let mut ent = reduced_entities(&res.reduction);
    ent.push_str(&emit::groupoid(g.groupoid, g_sg));
    ent.push_str(&emit::action("residual", g.groupoid, "reduced", Some("reduced_bracket"), &res.action));
    r.entities = Some(ent);
    Ok(())
}

fn bimodule<'a>(s: &'a Session, name: &str) -> Run<(&'a Bimodule, bool)> {
    match s.get(name).map(|d| &d.entity) {
        Some(Entity::Bimodule { bimodule, unit }) => Ok((bimodule, *unit)),
        Some(e) => input(format!("`{name}` is a {}, expected a bimodule", e.kind())),
        None => input(format!("no bimodule named `{name}` in the session")),
    }
}

fn compose_cmd(s: &Session, opts: &Options, r: &mut Report) -> Run<()> {
    let names: Vec<String> = match opts.bimodules.as_slice() {
        [] => s.names_of(Kind::Bimodule).into_iter().take(2).map(str::to_string).collect(),
        given => given.to_vec(),
    };
    let [m_name, n_name] = names.as_slice() else {
        return input("compose needs two bimodules; pass --bimodule twice or declare two");
    };
    let (m, _) = bimodule(s, m_name)?;
    let (n, n_unit) = bimodule(s, n_name)?;
    let mut ok = true;
    for (label, b) in [(m_name, m), (n_name, n)] {
        let left = check_hamiltonian(&b.left, &b.left_groupoid, &b.poisson)?.to_report();
        let right = check_hamiltonian(&b.right, &b.right_groupoid.negated(), &b.poisson)?.to_report();
        ok &= left.passed() && right.passed();
        absorb(r, Some(&format!("{label}/left hamiltonian")), left);
        absorb(r, Some(&format!("{label}/right hamiltonian")), right);
    }
    if !ok {
        r.push_text("composition", "not attempted: a bimodule is not Hamiltonian");
        return Ok(());
    }
    let comp = compose_hamiltonian_schemes(m, n, opts.degree_bound, opts.closure_cap)?;
    absorb(r, Some("residual"), comp.residual.report.clone());
    let red = &comp.residual.reduction;
    absorb(r, Some("verify"), verify_reduction(red, opts.verify_trials, opts.seed)?);
    push_reduction(r, red);
    r.push_list("residual moment", morphism_table(&comp.residual.action.moment));
    r.push_list("residual act", morphism_table(&comp.residual.action.act));
    if n_unit {
        let iso = unit_isomorphism(m, &comp)?;
        r.push_text("isomorphic to input reduction", if iso.holds() { "yes" } else { "no" });
        r.push_list("isomorphism forward", morphism_table(&iso.forward));
        r.push_list("isomorphism backward", morphism_table(&iso.backward));
        absorb(r, Some("isomorphism"), iso.report);
    }
    let mut ent = reduced_entities(red);
    ent.push_str(&emit::groupoid("outer", &comp.outer));
    ent.push_str(&emit::action("residual", "outer", "reduced", Some("reduced_bracket"), &comp.residual.action));
    r.entities = Some(ent);
    Ok(())
}
