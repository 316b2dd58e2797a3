//! Serialize engine objects back into session declarations.

use std::fmt::Write;

use coisored_core::action::GroupoidAction;
use coisored_core::algebra::{AlgebraMorphism, PresentedAlgebra};
use coisored_core::groupoid::SymplecticGroupoid;
use coisored_core::poisson::PoissonStructure;

const INDENT: &str = "  ";

/// `key = a, b, c` with one entry per line when there is more than one.
fn field(out: &mut String, key: &str, entries: &[String]) {
    let _ = write!(out, "{INDENT}{key} = ");
    let pad = " ".repeat(INDENT.len() + key.len() + 3);
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            let _ = write!(out, ",\n{pad}");
        }
        out.push_str(e);
    }
    out.push('\n');
}

fn map_entries(m: &AlgebraMorphism) -> Vec<String> {
    m.source()
        .ring()
        .names()
        .iter()
        .zip(m.images())
        .map(|(v, p)| format!("{v} -> {p}"))
        .collect()
}

pub fn ring(name: &str, a: &PresentedAlgebra) -> String {
    let mut out = format!("ring {name} {{\n");
    field(&mut out, "vars", &[a.ring().names().join(", ")]);
    let rels: Vec<String> = a.relations().generators().iter().map(|p| p.to_string()).collect();
    if !rels.is_empty() {
        field(&mut out, "relations", &rels);
    }
    out.push_str("}\n");
    out
}

pub fn poisson(name: &str, ring_name: &str, p: &PoissonStructure) -> String {
    let names = p.algebra().ring().names();
    let mut out = format!("poisson {name} {{\n");
    field(&mut out, "ring", &[ring_name.to_string()]);
    let entries: Vec<String> = p
        .nonzero_entries()
        .into_iter()
        .map(|(i, j, v)| format!("{} {} -> {v}", names[i], names[j]))
        .collect();
    if !entries.is_empty() {
        field(&mut out, "brackets", &entries);
    }
    out.push_str("}\n");
    out
}

/// A symplectic groupoid with its rings and structures, all declared under
/// `name_*` names.
pub fn groupoid(name: &str, sg: &SymplecticGroupoid) -> String {
    let g = &sg.groupoid;
    let (base, total) = (format!("{name}_base"), format!("{name}_total"));
    let (bp, tp) = (format!("{name}_base_poisson"), format!("{name}_poisson"));
    let mut out = ring(&base, &g.base);
    out.push_str(&ring(&total, &g.total));
    out.push_str(&poisson(&bp, &base, &sg.base_poisson));
    out.push_str(&poisson(&tp, &total, &sg.total_poisson));
    let _ = writeln!(out, "groupoid {name} {{");
    field(&mut out, "base", &[base]);
    field(&mut out, "total", &[total]);
    for (key, m) in [("src", &g.src), ("tgt", &g.tgt), ("unit", &g.unit), ("inv", &g.inv), ("mult", &g.mult)] {
        field(&mut out, key, &map_entries(m));
    }
    field(&mut out, "poisson", &[tp]);
    field(&mut out, "base_poisson", &[bp]);
    out.push_str("}\n");
    out
}

pub fn action(name: &str, groupoid: &str, module: &str, poisson: Option<&str>, a: &GroupoidAction) -> String {
    let mut out = format!("action {name} {{\n");
    field(&mut out, "groupoid", &[groupoid.to_string()]);
    field(&mut out, "module", &[module.to_string()]);
    if let Some(p) = poisson {
        field(&mut out, "poisson", &[p.to_string()]);
    }
    field(&mut out, "moment", &map_entries(&a.moment));
    field(&mut out, "act", &map_entries(&a.act));
    out.push_str("}\n");
    out
}
