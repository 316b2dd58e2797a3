//! Session files: an ordered list of named declarations, each either a
//! `kind name { key = value ... }` block or a `kind name = builtin(args)` line.
//! See `docs/format.md` for the grammar.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use coisored_core::action::GroupoidAction;
use coisored_core::algebra::{fibered_coproduct, AlgebraMorphism, PresentedAlgebra};
use coisored_core::arith::{Polynomial, Ring, RingRef};
use coisored_core::groebner::Ideal;
use coisored_core::groupoid::{
    cotangent_groupoid_torus, pair_groupoid, torus_group, trivial_groupoid, AffineGroupoid, Subgroupoid,
    SymplecticGroupoid,
};
use coisored_core::poisson::PoissonStructure;
use coisored_core::reduction::{unit_bimodule, Bimodule};
use coisored_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unknown name `{name}`")]
    UnknownName { line: usize, column: usize, name: String },
    #[error("{line}:{column}: `{name}` is a {found}, expected a {expected}")]
    TypeMismatch {
        line: usize,
        column: usize,
        name: String,
        found: Kind,
        expected: Kind,
    },
    #[error("{line}:{column}: {message}")]
    Invalid { line: usize, column: usize, message: String },
}

impl SessionError {
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            SessionError::Io { .. } => None,
            SessionError::Syntax { line, column, .. }
            | SessionError::UnknownName { line, column, .. }
            | SessionError::TypeMismatch { line, column, .. }
            | SessionError::Invalid { line, column, .. } => Some((*line, *column)),
        }
    }
}

type SResult<T> = std::result::Result<T, SessionError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Ring,
    Ideal,
    Poisson,
    Morphism,
    Groupoid,
    Subgroupoid,
    Action,
    Bimodule,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Ring,
        Kind::Ideal,
        Kind::Poisson,
        Kind::Morphism,
        Kind::Groupoid,
        Kind::Subgroupoid,
        Kind::Action,
        Kind::Bimodule,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Ring => "ring",
            Kind::Ideal => "ideal",
            Kind::Poisson => "poisson",
            Kind::Morphism => "morphism",
            Kind::Groupoid => "groupoid",
            Kind::Subgroupoid => "subgroupoid",
            Kind::Action => "action",
            Kind::Bimodule => "bimodule",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A resolved declaration.
#[derive(Clone, Debug)]
pub enum Entity {
    Ring(PresentedAlgebra),
    Ideal(Ideal),
    Poisson(PoissonStructure),
    Morphism(AlgebraMorphism),
    Groupoid {
        groupoid: AffineGroupoid,
        symplectic: Option<SymplecticGroupoid>,
    },
    Subgroupoid {
        groupoid: String,
        sub: Subgroupoid,
    },
    Action {
        groupoid: String,
        poisson: Option<String>,
        action: GroupoidAction,
    },
    Bimodule {
        bimodule: Bimodule,
        /// Built by `unit(G)`.
        unit: bool,
    },
}

impl Entity {
    pub fn kind(&self) -> Kind {
        match self {
            Entity::Ring(_) => Kind::Ring,
            Entity::Ideal(_) => Kind::Ideal,
            Entity::Poisson(_) => Kind::Poisson,
            Entity::Morphism(_) => Kind::Morphism,
            Entity::Groupoid { .. } => Kind::Groupoid,
            Entity::Subgroupoid { .. } => Kind::Subgroupoid,
            Entity::Action { .. } => Kind::Action,
            Entity::Bimodule { .. } => Kind::Bimodule,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Declaration {
    pub name: String,
    pub line: usize,
    pub entity: Entity,
}

#[derive(Clone, Debug, Default)]
pub struct Session {
    pub declarations: Vec<Declaration>,
    index: HashMap<String, usize>,
}

impl Session {
    pub fn len(&self) -> usize {
        self.declarations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.declarations.is_empty()
    }

    pub fn count(&self, kind: Kind) -> usize {
        self.declarations.iter().filter(|d| d.entity.kind() == kind).count()
    }

    pub fn get(&self, name: &str) -> Option<&Declaration> {
        self.index.get(name).map(|&i| &self.declarations[i])
    }

    pub fn names_of(&self, kind: Kind) -> Vec<&str> {
        self.declarations
            .iter()
            .filter(|d| d.entity.kind() == kind)
            .map(|d| d.name.as_str())
            .collect()
    }

    fn push(&mut self, name: &Item, entity: Entity) -> SResult<()> {
        if self.index.contains_key(&name.text) {
            return Err(name.invalid(format!("`{}` is already declared", name.text)));
        }
        self.index.insert(name.text.clone(), self.declarations.len());
        self.declarations.push(Declaration {
            name: name.text.clone(),
            line: name.line,
            entity,
        });
        Ok(())
    }

    fn lookup(&self, item: &Item, expected: Kind) -> SResult<&Entity> {
        let d = self.get(&item.text).ok_or_else(|| SessionError::UnknownName {
            line: item.line,
            column: item.col,
            name: item.text.clone(),
        })?;
        if d.entity.kind() != expected {
            return Err(SessionError::TypeMismatch {
                line: item.line,
                column: item.col,
                name: item.text.clone(),
                found: d.entity.kind(),
                expected,
            });
        }
        Ok(&d.entity)
    }

    fn ring(&self, item: &Item) -> SResult<PresentedAlgebra> {
        match self.lookup(item, Kind::Ring)? {
            Entity::Ring(a) => Ok(a.clone()),
            _ => unreachable!(),
        }
    }

    fn poisson(&self, item: &Item) -> SResult<PoissonStructure> {
        match self.lookup(item, Kind::Poisson)? {
            Entity::Poisson(p) => Ok(p.clone()),
            _ => unreachable!(),
        }
    }

    fn groupoid(&self, item: &Item) -> SResult<(AffineGroupoid, Option<SymplecticGroupoid>)> {
        match self.lookup(item, Kind::Groupoid)? {
            Entity::Groupoid { groupoid, symplectic } => Ok((groupoid.clone(), symplectic.clone())),
            _ => unreachable!(),
        }
    }

    fn action(&self, item: &Item) -> SResult<(GroupoidAction, String, Option<String>)> {
        match self.lookup(item, Kind::Action)? {
            Entity::Action { groupoid, poisson, action } => Ok((action.clone(), groupoid.clone(), poisson.clone())),
            _ => unreachable!(),
        }
    }
}

/// A piece of source text with the position of its first character.
#[derive(Clone, Debug)]
struct Item {
    text: String,
    line: usize,
    col: usize,
}

impl Item {
    fn syntax(&self, message: impl Into<String>) -> SessionError {
        SessionError::Syntax {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn invalid(&self, message: impl Into<String>) -> SessionError {
        SessionError::Invalid {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    /// Sub-item starting at byte offset `off` of `text`, trimmed.
    fn slice(&self, off: usize, end: usize) -> Item {
        let raw = &self.text[off..end];
        let lead = raw.len() - raw.trim_start().len();
        Item {
            text: raw.trim().to_string(),
            line: self.line,
            col: self.col + self.text[..off + lead].chars().count(),
        }
    }

    /// Error from the core engine, located inside this item when it carries a column.
    fn core(&self, e: CoreError) -> SessionError {
        match e {
            CoreError::Parse { column, message } => SessionError::Syntax {
                line: self.line,
                column: self.col + column - 1,
                message,
            },
            other => self.invalid(other.to_string()),
        }
    }
}

struct Field {
    key: Item,
    /// Comma-separated items; empty for an empty value.
    items: Vec<Item>,
}

enum Body {
    Block(Vec<Field>),
    Call { func: Item, args: Vec<Item> },
}

struct RawDecl {
    kind: Item,
    name: Item,
    body: Body,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn line_item(text: &str, line: usize) -> Item {
    let lead = text.len() - text.trim_start().len();
    Item {
        text: text.trim().to_string(),
        line,
        col: text[..lead].chars().count() + 1,
    }
}

fn split_commas(item: &Item) -> Vec<Item> {
    if item.text.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in item.text.char_indices() {
        if c == ',' {
            out.push(item.slice(start, i));
            start = i + 1;
        }
    }
    out.push(item.slice(start, item.text.len()));
    out
}

fn is_identifier(s: &str) -> bool {
    coisored_core::arith::is_identifier(s)
}

fn split_words(item: &Item) -> Vec<Item> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in item.text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(item.slice(s, i));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(item.slice(s, item.text.len()));
    }
    out
}

fn lex(text: &str) -> SResult<Vec<RawDecl>> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l))).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (ln, raw) = lines[i];
        i += 1;
        let whole = line_item(raw, ln);
        if whole.text.is_empty() {
            continue;
        }
        let (head, tail) = match whole.text.find(['{', '=']) {
            Some(p) => (whole.slice(0, p), Some(p)),
            None => return Err(whole.syntax("expected `kind name { ... }` or `kind name = builtin(...)`")),
        };
        let words = split_words(&head);
        if words.len() != 2 {
            return Err(head.syntax("a declaration starts with a kind and a name"));
        }
        let (kind, name) = (words[0].clone(), words[1].clone());
        if Kind::parse(&kind.text).is_none() {
            return Err(kind.syntax(format!("unknown declaration kind `{}`", kind.text)));
        }
        if !is_identifier(&name.text) {
            return Err(name.syntax(format!("invalid name `{}`", name.text)));
        }
        let p = tail.expect("found above");
        if whole.text[p..].starts_with('=') {
            let call = whole.slice(p + 1, whole.text.len());
            out.push(RawDecl {
                kind,
                name,
                body: parse_call(&call)?,
            });
            continue;
        }
        let rest = whole.slice(p + 1, whole.text.len());
        let mut fields = Vec::new();
        if rest.text == "}" {
            out.push(RawDecl {
                kind,
                name,
                body: Body::Block(fields),
            });
            continue;
        }
        if !rest.text.is_empty() {
            return Err(rest.syntax("fields start on the line after `{`"));
        }
        let mut closed = false;
        while i < lines.len() {
            let (ln, raw) = lines[i];
            i += 1;
            let it = line_item(raw, ln);
            if it.text.is_empty() {
                continue;
            }
            if it.text == "}" {
                closed = true;
                break;
            }
            let Some(eq) = it.text.find('=') else {
                return Err(it.syntax("expected `key = value`"));
            };
            let key = it.slice(0, eq);
            if !is_identifier(&key.text) {
                return Err(key.syntax(format!("invalid key `{}`", key.text)));
            }
            let mut value = it.slice(eq + 1, it.text.len());
            let mut items = split_commas(&value);
            // A trailing comma continues the value on the next non-blank line.
            while value.text.ends_with(',') {
                items.pop();
                let mut next = None;
                while i < lines.len() {
                    let (ln, raw) = lines[i];
                    i += 1;
                    let it = line_item(raw, ln);
                    if !it.text.is_empty() {
                        next = Some(it);
                        break;
                    }
                }
                let Some(n) = next else {
                    return Err(value.syntax("value continues past the end of the file"));
                };
                if n.text == "}" {
                    return Err(n.syntax("value ends with a comma"));
                }
                items.extend(split_commas(&n));
                value = n;
            }
            if let Some(empty) = items.iter().find(|it| it.text.is_empty()) {
                return Err(empty.syntax("empty list entry"));
            }
            fields.push(Field { key, items });
        }
        if !closed {
            return Err(name.syntax(format!("block `{}` is not closed with `}}`", name.text)));
        }
        out.push(RawDecl {
            kind,
            name,
            body: Body::Block(fields),
        });
    }
    Ok(out)
}

fn parse_call(call: &Item) -> SResult<Body> {
    let Some(open) = call.text.find('(') else {
        return Err(call.syntax("expected `builtin(args)`"));
    };
    if !call.text.ends_with(')') {
        return Err(call.syntax("expected `)` at the end of the line"));
    }
    let func = call.slice(0, open);
    if !is_identifier(&func.text) {
        return Err(func.syntax(format!("invalid builtin name `{}`", func.text)));
    }
    let inner = call.slice(open + 1, call.text.len() - 1);
    let args = split_commas(&inner);
    if let Some(empty) = args.iter().find(|it| it.text.is_empty()) {
        return Err(empty.syntax("empty argument"));
    }
    Ok(Body::Call { func, args })
}

/// Fields of one block, consumed by key.
struct Fields<'a> {
    decl: &'a RawDecl,
    map: HashMap<String, &'a Field>,
}

impl<'a> Fields<'a> {
    fn new(decl: &'a RawDecl, fields: &'a [Field], allowed: &[&str]) -> SResult<Self> {
        let mut map = HashMap::new();
        for f in fields {
            if !allowed.contains(&f.key.text.as_str()) {
                return Err(f.key.syntax(format!(
                    "unknown key `{}` for {} (expected one of: {})",
                    f.key.text,
                    decl.kind.text,
                    allowed.join(", ")
                )));
            }
            if map.insert(f.key.text.clone(), f).is_some() {
                return Err(f.key.syntax(format!("key `{}` given twice", f.key.text)));
            }
        }
        Ok(Fields { decl, map })
    }

    fn optional(&self, key: &str) -> Option<&'a Field> {
        self.map.get(key).copied()
    }

    fn required(&self, key: &str) -> SResult<&'a Field> {
        self.optional(key)
            .ok_or_else(|| self.decl.name.invalid(format!("{} `{}` needs `{key} = ...`", self.decl.kind.text, self.decl.name.text)))
    }

    /// A single-item field.
    fn single(&self, key: &str) -> SResult<Item> {
        single(self.required(key)?)
    }

    fn single_opt(&self, key: &str) -> SResult<Option<Item>> {
        self.optional(key).map(single).transpose()
    }
}

fn single(f: &Field) -> SResult<Item> {
    match f.items.as_slice() {
        [one] => Ok(one.clone()),
        [] => Err(f.key.syntax(format!("`{}` needs a value", f.key.text))),
        [_, second, ..] => Err(second.syntax(format!("`{}` takes a single value", f.key.text))),
    }
}

fn parse_poly(ring: &RingRef, item: &Item) -> SResult<Polynomial> {
    Polynomial::parse(ring, &item.text).map_err(|e| item.core(e))
}

fn parse_polys(ring: &RingRef, field: Option<&Field>) -> SResult<Vec<Polynomial>> {
    match field {
        None => Ok(Vec::new()),
        Some(f) => f.items.iter().map(|it| parse_poly(ring, it)).collect(),
    }
}

/// `x -> poly` entries, one for every variable of `source`.
fn parse_map(field: &Field, source: &RingRef, target: &RingRef) -> SResult<Vec<Polynomial>> {
    let mut images: Vec<Option<Polynomial>> = vec![None; source.len()];
    for it in &field.items {
        let Some(arrow) = it.text.find("->") else {
            return Err(it.syntax("expected `variable -> polynomial`"));
        };
        let var = it.slice(0, arrow);
        let img = it.slice(arrow + 2, it.text.len());
        let Some(i) = source.index_of(&var.text) else {
            return Err(var.invalid(format!("`{}` is not a variable of the source", var.text)));
        };
        if images[i].is_some() {
            return Err(var.invalid(format!("image of `{}` given twice", var.text)));
        }
        images[i] = Some(parse_poly(target, &img)?);
    }
    images
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| field.key.invalid(format!("no image given for `{}`", source.name(i)))))
        .collect()
}

/// Either the name of a declared morphism or an inline map.
fn morphism_field(
    session: &Session,
    field: &Field,
    source: &PresentedAlgebra,
    target: &PresentedAlgebra,
) -> SResult<AlgebraMorphism> {
    if let [one] = field.items.as_slice() {
        if !one.text.contains("->") {
            let Entity::Morphism(m) = session.lookup(one, Kind::Morphism)? else {
                unreachable!()
            };
            if !Ring::same(m.source().ring(), source.ring()) || !Ring::same(m.target().ring(), target.ring()) {
                return Err(one.invalid(format!("morphism `{}` has the wrong source or target", one.text)));
            }
            return Ok(m.clone());
        }
    }
    let imgs = parse_map(field, source.ring(), target.ring())?;
    AlgebraMorphism::new(source, target, imgs).map_err(|e| field.key.core(e))
}

fn identifiers(field: Option<&Field>) -> SResult<Vec<String>> {
    let Some(f) = field else { return Ok(Vec::new()) };
    f.items
        .iter()
        .map(|it| {
            if is_identifier(&it.text) {
                Ok(it.text.clone())
            } else {
                Err(it.syntax(format!("invalid variable name `{}`", it.text)))
            }
        })
        .collect()
}

fn ideal_field(session: &Session, field: Option<&Field>, ring: &RingRef) -> SResult<Vec<Polynomial>> {
    if let Some(f) = field {
        if let [one] = f.items.as_slice() {
            if session.get(&one.text).is_some() {
                let Entity::Ideal(i) = session.lookup(one, Kind::Ideal)? else {
                    unreachable!()
                };
                if !Ring::same(i.ring(), ring) {
                    return Err(one.invalid(format!("ideal `{}` lives in another ring", one.text)));
                }
                return Ok(i.generators().to_vec());
            }
        }
    }
    parse_polys(ring, field)
}

fn expect_args(func: &Item, args: &[Item], n: usize) -> SResult<()> {
    if args.len() != n {
        return Err(func.syntax(format!("`{}` takes {n} argument(s), got {}", func.text, args.len())));
    }
    Ok(())
}

fn builtin(session: &Session, kind: Kind, func: &Item, args: &[Item]) -> SResult<Entity> {
    let symplectic = |sg: SymplecticGroupoid| Entity::Groupoid {
        groupoid: sg.groupoid.clone(),
        symplectic: Some(sg),
    };
    match (kind, func.text.as_str()) {
        (Kind::Groupoid, "cotangent_torus") | (Kind::Groupoid, "torus") => {
            expect_args(func, args, 1)?;
            let n: usize = args[0]
                .text
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| args[0].syntax("expected a positive integer"))?;
            if func.text == "torus" {
                let g = torus_group(n).map_err(|e| func.core(e))?;
                Ok(Entity::Groupoid { groupoid: g, symplectic: None })
            } else {
                Ok(symplectic(cotangent_groupoid_torus(n).map_err(|e| func.core(e))?))
            }
        }
        (Kind::Groupoid, "pair") => {
            expect_args(func, args, 1)?;
            let p = session.poisson(&args[0])?;
            Ok(symplectic(pair_groupoid(&p).map_err(|e| args[0].core(e))?))
        }
        (Kind::Groupoid, "trivial") => {
            expect_args(func, args, 0)?;
            Ok(symplectic(trivial_groupoid().map_err(|e| func.core(e))?))
        }
        (Kind::Bimodule, "unit") => {
            expect_args(func, args, 1)?;
            let (_, sg) = session.groupoid(&args[0])?;
            let sg = sg.ok_or_else(|| args[0].invalid(format!("`{}` has no Poisson structures", args[0].text)))?;
            Ok(Entity::Bimodule {
                bimodule: unit_bimodule(&sg).map_err(|e| args[0].core(e))?,
                unit: true,
            })
        }
        _ => Err(func.syntax(format!("no builtin `{}` for {kind}", func.text))),
    }
}

fn resolve(session: &Session, decl: &RawDecl, kind: Kind, fields: &[Field]) -> SResult<Entity> {
    let name = &decl.name.text;
    match kind {
        Kind::Ring => {
            let f = Fields::new(decl, fields, &["vars", "relations"])?;
            let vars_field = f.required("vars")?;
            let ring = Ring::new(identifiers(Some(vars_field))?).map_err(|e| vars_field.key.core(e))?;
            let rels = parse_polys(&ring, f.optional("relations"))?;
            Ok(Entity::Ring(PresentedAlgebra::new(name.clone(), &ring, rels)))
        }
        Kind::Ideal => {
            let f = Fields::new(decl, fields, &["ring", "gens"])?;
            let ring = session.ring(&f.single("ring")?)?;
            let gens = parse_polys(ring.ring(), f.optional("gens"))?;
            Ok(Entity::Ideal(Ideal::new(ring.ring(), gens)))
        }
        Kind::Poisson => {
            let f = Fields::new(decl, fields, &["ring", "brackets"])?;
            let ring = session.ring(&f.single("ring")?)?;
            let mut entries = Vec::new();
            for it in f.optional("brackets").map(|b| b.items.as_slice()).unwrap_or(&[]) {
                let Some(arrow) = it.text.find("->") else {
                    return Err(it.syntax("expected `x y -> polynomial`"));
                };
                let pair = split_words(&it.slice(0, arrow));
                if pair.len() != 2 {
                    return Err(it.syntax("a bracket entry names two variables"));
                }
                for v in &pair {
                    if ring.ring().index_of(&v.text).is_none() {
                        return Err(v.invalid(format!("`{}` is not a variable of `{}`", v.text, ring.label())));
                    }
                }
                let value = parse_poly(ring.ring(), &it.slice(arrow + 2, it.text.len()))?;
                entries.push((pair[0].text.clone(), pair[1].text.clone(), value));
            }
            let p = PoissonStructure::from_entries(&ring, &entries).map_err(|e| decl.name.core(e))?;
            Ok(Entity::Poisson(p))
        }
        Kind::Morphism => {
            let f = Fields::new(decl, fields, &["from", "to", "images"])?;
            let from = session.ring(&f.single("from")?)?;
            let to = session.ring(&f.single("to")?)?;
            let imgs = parse_map(f.required("images")?, from.ring(), to.ring())?;
            let m = AlgebraMorphism::new(&from, &to, imgs).map_err(|e| decl.name.core(e))?;
            Ok(Entity::Morphism(m))
        }
        Kind::Groupoid => {
            let f = Fields::new(
                decl,
                fields,
                &["base", "total", "src", "tgt", "unit", "inv", "mult", "poisson", "base_poisson"],
            )?;
            let base = session.ring(&f.single("base")?)?;
            let total = session.ring(&f.single("total")?)?;
            let src = morphism_field(session, f.required("src")?, &base, &total)?;
            let tgt = morphism_field(session, f.required("tgt")?, &base, &total)?;
            let unit = morphism_field(session, f.required("unit")?, &total, &base)?;
            let inv = morphism_field(session, f.required("inv")?, &total, &total)?;
            let composable = fibered_coproduct(&total, &total, &base, &src, &tgt).map_err(|e| decl.name.core(e))?;
            let mult_field = f.required("mult")?;
            let mult = parse_map(mult_field, total.ring(), composable.ring())?;
            let g = AffineGroupoid::new(name.clone(), &base, &total, src, tgt, unit, inv, mult)
                .map_err(|e| decl.name.core(e))?;
            let symplectic = match (f.single_opt("poisson")?, f.single_opt("base_poisson")?) {
                (None, None) => None,
                (Some(p), Some(b)) => {
                    let tp = session.poisson(&p)?;
                    let bp = session.poisson(&b)?;
                    if !Ring::same(tp.algebra().ring(), total.ring()) {
                        return Err(p.invalid(format!("`{}` is not a structure on `{}`", p.text, total.label())));
                    }
                    if !Ring::same(bp.algebra().ring(), base.ring()) {
                        return Err(b.invalid(format!("`{}` is not a structure on `{}`", b.text, base.label())));
                    }
                    Some(SymplecticGroupoid {
                        groupoid: g.clone(),
                        total_poisson: tp.over(&g.total).map_err(|e| p.core(e))?,
                        base_poisson: bp.over(&g.base).map_err(|e| b.core(e))?,
                    })
                }
                _ => return Err(decl.name.invalid("`poisson` and `base_poisson` go together")),
            };
            Ok(Entity::Groupoid { groupoid: g, symplectic })
        }
        Kind::Subgroupoid => {
            let f = Fields::new(decl, fields, &["groupoid", "total", "base", "stabilizer"])?;
            let gi = f.single("groupoid")?;
            let (g, _) = session.groupoid(&gi)?;
            let total = ideal_field(session, f.optional("total"), g.total.ring())?;
            let base = ideal_field(session, f.optional("base"), g.base.ring())?;
            let stabilizer = match f.single_opt("stabilizer")? {
                None => false,
                Some(it) => match it.text.as_str() {
                    "true" => true,
                    "false" => false,
                    _ => return Err(it.syntax("expected `true` or `false`")),
                },
            };
            let sub = Subgroupoid::new(name.clone(), &g, total, base, stabilizer).map_err(|e| decl.name.core(e))?;
            Ok(Entity::Subgroupoid { groupoid: gi.text, sub })
        }
        Kind::Action => {
            let f = Fields::new(decl, fields, &["groupoid", "module", "poisson", "moment", "act"])?;
            let gi = f.single("groupoid")?;
            let (g, _) = session.groupoid(&gi)?;
            let mi = f.single("module")?;
            let (module, implied) = match session.get(&mi.text).map(|d| d.entity.kind()) {
                Some(Kind::Poisson) => (session.poisson(&mi)?.algebra().clone(), Some(mi.text.clone())),
                _ => (session.ring(&mi)?, None),
            };
            let poisson = match f.single_opt("poisson")? {
                None => implied,
                Some(p) => {
                    let ps = session.poisson(&p)?;
                    if !Ring::same(ps.algebra().ring(), module.ring()) {
                        return Err(p.invalid(format!("`{}` is not a structure on the module", p.text)));
                    }
                    Some(p.text)
                }
            };
            let moment_field = f.required("moment")?;
            let moment = morphism_field(session, moment_field, &g.base, &module)?;
            let c = fibered_coproduct(&g.total, &module, &g.base, &g.src, &moment).map_err(|e| decl.name.core(e))?;
            let imgs = parse_map(f.required("act")?, module.ring(), c.ring())?;
            let action = GroupoidAction::new(name.clone(), &g, &module, moment, imgs).map_err(|e| decl.name.core(e))?;
            Ok(Entity::Action {
                groupoid: gi.text,
                poisson,
                action,
            })
        }
        Kind::Bimodule => {
            let f = Fields::new(decl, fields, &["left", "right"])?;
            let li = f.single("left")?;
            let ri = f.single("right")?;
            let (left, lg, lp) = session.action(&li)?;
            let (right, rg, rp) = session.action(&ri)?;
            if !Ring::same(left.module.ring(), right.module.ring()) {
                return Err(ri.invalid("left and right actions must act on the same module"));
            }
            let poisson = match (lp, rp) {
                (Some(a), Some(b)) if a == b => a,
                (Some(_), Some(_)) => return Err(ri.invalid("left and right actions carry different Poisson structures")),
                _ => return Err(li.invalid("bimodule actions need a Poisson structure on the module")),
            };
            let sym = |it: &Item, g: &str| -> SResult<SymplecticGroupoid> {
                let gi = Item {
                    text: g.to_string(),
                    line: it.line,
                    col: it.col,
                };
                session
                    .groupoid(&gi)?
                    .1
                    .ok_or_else(|| it.invalid(format!("groupoid `{g}` has no Poisson structures")))
            };
            let pm = session.poisson(&Item {
                text: poisson,
                line: li.line,
                col: li.col,
            })?;
            Ok(Entity::Bimodule {
                bimodule: Bimodule {
                    label: name.clone(),
                    left_groupoid: sym(&li, &lg)?,
                    right_groupoid: sym(&ri, &rg)?,
                    left,
                    right,
                    poisson: pm,
                },
                unit: false,
            })
        }
    }
}

/// Parse and validate session text.
pub fn parse_session_str(text: &str) -> SResult<Session> {
    let mut session = Session::default();
    for decl in lex(text)? {
        let kind = Kind::parse(&decl.kind.text).expect("checked while lexing");
        let entity = match &decl.body {
            Body::Call { func, args } => builtin(&session, kind, func, args)?,
            Body::Block(fields) => resolve(&session, &decl, kind, fields)?,
        };
        session.push(&decl.name, entity)?;
    }
    Ok(session)
}

pub fn parse_session(path: &Path) -> SResult<Session> {
    let text = std::fs::read_to_string(path).map_err(|e| SessionError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_session_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_ring() {
        let s = parse_session_str("ring R {\n  vars = x, y\n}\n").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.count(Kind::Ring), 1);
    }

    #[test]
    fn undeclared_name_is_located() {
        let text = "ring R {\n  vars = x\n}\npoisson P {\n  ring = S\n}\n";
        let e = parse_session_str(text).unwrap_err();
        assert_eq!(
            e,
            SessionError::UnknownName {
                line: 5,
                column: 10,
                name: "S".into()
            }
        );
    }

    #[test]
    fn polynomial_errors_point_into_the_line() {
        let text = "ring R {\n  vars = x, y\n  relations = x*y - 1, x + $\n}\n";
        let e = parse_session_str(text).unwrap_err();
        assert_eq!(e.location(), Some((3, 28)), "{e}");
    }

    #[test]
    fn unknown_variable_in_map() {
        let text = "ring A {\n  vars = x\n}\nmorphism f {\n  from = A\n  to = A\n  images = x -> w\n}\n";
        let e = parse_session_str(text).unwrap_err();
        assert_eq!(e.location().unwrap().0, 7, "{e}");
        assert!(e.to_string().contains('w'), "{e}");
    }

    #[test]
    fn type_mismatch() {
        let text = "ring A {\n  vars = x\n}\ngroupoid G = pair(A)\n";
        let e = parse_session_str(text).unwrap_err();
        assert!(matches!(e, SessionError::TypeMismatch { line: 4, column: 19, .. }), "{e}");
    }

    #[test]
    fn continuation_lines_and_comments() {
        let text = "# plane\nring R {\n  vars = q,\n         p   # coordinates\n}\npoisson P {\n  ring = R\n  brackets = q p -> 1\n}\ngroupoid G = pair(P)\n";
        let s = parse_session_str(text).unwrap();
        assert_eq!(s.count(Kind::Groupoid), 1);
        match &s.get("G").unwrap().entity {
            Entity::Groupoid { symplectic, .. } => assert!(symplectic.is_some()),
            _ => panic!(),
        }
    }

    #[test]
    fn duplicate_names_rejected() {
        let text = "ring R {\n  vars = x\n}\nring R {\n  vars = y\n}\n";
        let e = parse_session_str(text).unwrap_err();
        assert_eq!(e.location(), Some((4, 6)));
    }

    #[test]
    fn missing_image_is_reported() {
        let text = "ring A {\n  vars = x, y\n}\nmorphism f {\n  from = A\n  to = A\n  images = x -> y\n}\n";
        let e = parse_session_str(text).unwrap_err();
        assert!(e.to_string().contains("no image given for `y`"), "{e}");
    }
}
