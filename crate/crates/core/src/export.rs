//! JSON and DOT renderings of arenas, augmentations and strategies.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{Arena, ArenaAddress, Polarity};
use crate::causal::{Augmentation, IsoKey};
use crate::strategy::{Coeff, Interface, Strategy};
use crate::syntax::{parse_type, SimpleType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("bad interface `{0}`")]
    Interface(String),
    #[error("event {0}: {1}")]
    Event(usize, String),
    #[error("invalid augmentation: {0}")]
    Invalid(String),
    #[error("{0}")]
    Coefficient(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EventJson {
    pub id: usize,
    pub display: ArenaAddress,
    pub static_parent: Option<usize>,
    pub dyn_parent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentationJson {
    /// `A1, …, An |- B1, …, Bm`.
    pub arena: String,
    pub events: Vec<EventJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceJson {
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub augmentation: AugmentationJson,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyJson {
    pub interface: InterfaceJson,
    pub entries: Vec<EntryJson>,
}

fn join(ts: &[SimpleType]) -> String {
    ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

fn split_types(s: &str) -> Result<Vec<SimpleType>, FormatError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            // tolerate `name:type`
            let ty = p.split_once(':').map_or(p, |(_, t)| t);
            parse_type(ty).map_err(|e| FormatError::Interface(format!("{p}: {e}")))
        })
        .collect()
}

pub fn interface_string(iface: &Interface) -> String {
    format!("{} |- {}", join(&iface.left), join(&iface.right))
}

pub fn parse_interface(s: &str) -> Result<Arc<Interface>, FormatError> {
    let (l, r) = s.split_once("|-").ok_or_else(|| FormatError::Interface(s.to_string()))?;
    Ok(Interface::new(split_types(l)?, split_types(r)?))
}

pub fn augmentation_to_json(q: &Augmentation, iface: &Interface) -> AugmentationJson {
    let events = (0..q.len())
        .map(|e| EventJson {
            id: e,
            display: iface.arena.address(q.display[e]),
            static_parent: q.static_parent[e],
            dyn_parent: q.dyn_parent[e],
        })
        .collect();
    AugmentationJson { arena: interface_string(iface), events }
}

pub fn augmentation_from_json(j: &AugmentationJson) -> Result<(Arc<Interface>, Augmentation), FormatError> {
    let iface = parse_interface(&j.arena)?;
    let n = j.events.len();
    let mut q = Augmentation { display: vec![0; n], static_parent: vec![None; n], dyn_parent: vec![None; n] };
    let mut seen = vec![false; n];
    for ev in &j.events {
        let e = ev.id;
        if e >= n || std::mem::replace(&mut seen[e], true) {
            return Err(FormatError::Event(e, "ids must be 0..n without repeats".into()));
        }
        q.display[e] = iface
            .arena
            .node_at(&ev.display)
            .ok_or_else(|| FormatError::Event(e, format!("no node at address {}", ev.display)))?;
        for p in [ev.static_parent, ev.dyn_parent].into_iter().flatten() {
            if p >= n {
                return Err(FormatError::Event(e, format!("unknown parent {p}")));
            }
        }
        q.static_parent[e] = ev.static_parent;
        q.dyn_parent[e] = ev.dyn_parent;
    }
    q.validate(&iface.arena).map_err(|err| FormatError::Invalid(err.to_string()))?;
    Ok((iface, q))
}

pub fn strategy_to_json(s: &Strategy) -> StrategyJson {
    let iface = s.interface();
    StrategyJson {
        interface: InterfaceJson { left: join(&iface.left), right: join(&iface.right) },
        entries: s
            .iter()
            .map(|(k, c)| EntryJson { augmentation: augmentation_to_json(&k.representative(), iface), coefficient: c.to_string() })
            .collect(),
    }
}

pub fn strategy_from_json(j: &StrategyJson) -> Result<Strategy, FormatError> {
    let iface = Interface::new(split_types(&j.interface.left)?, split_types(&j.interface.right)?);
    let mut s = Strategy::zero(iface.clone());
    for entry in &j.entries {
        let (i, q) = augmentation_from_json(&entry.augmentation)?;
        if *i != *iface {
            return Err(FormatError::Interface(entry.augmentation.arena.clone()));
        }
        let c: Coeff = entry.coefficient.parse().map_err(FormatError::Coefficient)?;
        s.add_entry(IsoKey::of(&q), c);
    }
    Ok(s)
}

fn polarity_mark(p: Polarity) -> &'static str {
    match p {
        Polarity::Neg => "-",
        Polarity::Pos => "+",
    }
}

/// Arena as a top-down forest; edges are dotted, nodes carry their polarity
/// and address.
pub fn arena_dot(arena: &Arena, title: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph arena {{").unwrap();
    writeln!(out, "  label={title:?};").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for n in 0..arena.len() {
        let label = format!("{} {}", polarity_mark(arena.polarity(n)), arena.address(n));
        writeln!(out, "  n{n} [label={label:?}];").unwrap();
    }
    for n in 0..arena.len() {
        if let Some(p) = arena.parent(n) {
            writeln!(out, "  n{p} -> n{n} [style=dotted, arrowhead=none];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Augmentation drawn with static edges dotted and dynamic edges solid.
pub fn augmentation_dot(q: &Augmentation, arena: &Arena, title: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph augmentation {{").unwrap();
    writeln!(out, "  label={title:?};").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for e in 0..q.len() {
        let d = q.display[e];
        let label = format!("{} {}", polarity_mark(arena.polarity(d)), arena.address(d));
        writeln!(out, "  e{e} [label={label:?}];").unwrap();
    }
    for e in 0..q.len() {
        if let Some(p) = q.static_parent[e] {
            writeln!(out, "  e{p} -> e{e} [style=dotted, arrowhead=none];").unwrap();
        }
        if let Some(p) = q.dyn_parent[e] {
            writeln!(out, "  e{p} -> e{e} [style=solid, arrowhead=normal];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::encode_term;
    use crate::syntax::{parse_context, parse_term};

    #[test]
    fn augmentation_round_trip() {
        let ctx = parse_context("f:o->o->o, x:o").unwrap();
        let (iso, ty) = encode_term(&ctx, &parse_term(r"\y:o. f[x][y, x]").unwrap()).unwrap();
        let iface = Interface::new(ctx.types(), vec![ty]);
        let j = augmentation_to_json(&iso.representative, &iface);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("staticParent"));
        let back: AugmentationJson = serde_json::from_str(&text).unwrap();
        let (i2, q) = augmentation_from_json(&back).unwrap();
        assert_eq!(*i2, *iface);
        assert_eq!(IsoKey::of(&q), iso.key);
    }

    #[test]
    fn strategy_round_trip() {
        let ctx = parse_context("y:o").unwrap();
        let (iso, ty) = encode_term(&ctx, &parse_term("y").unwrap()).unwrap();
        let s = Strategy::from_entries(Interface::new(ctx.types(), vec![ty]), [(iso.key, Coeff::ratio(1, 6))]);
        let j = strategy_to_json(&s);
        assert_eq!(j.entries[0].coefficient, "1/6");
        assert_eq!(strategy_from_json(&j).unwrap(), s);
    }

    #[test]
    fn invalid_json_is_rejected() {
        let j = AugmentationJson {
            arena: " |- o".into(),
            events: vec![EventJson { id: 0, display: ArenaAddress(vec![0, 0]), static_parent: None, dyn_parent: None }],
        };
        assert!(augmentation_from_json(&j).is_err());
    }

    #[test]
    fn dot_output_shape() {
        let a = crate::arena::interpret_type(&parse_type("(o->o)->o").unwrap());
        let d = arena_dot(&a, "(o->o)->o");
        assert!(d.starts_with("digraph"));
        assert_eq!(d.matches("style=dotted").count(), 2);
    }
}
