//! Configurations, augmentations, symmetries and canonical forms.

mod canon;
mod enumerate;
mod symmetry;

use std::fmt;

use thiserror::Error;

use crate::arena::{Arena, NodeId, Polarity};

pub use canon::{canonicalize, canonicalize_position, Isogmentation, IsoKey, PosKey, Position};
pub use enumerate::{enumerate_augmentations, enumerate_positions, multisets};
pub use symmetry::{
    enumerate_symmetries, splitting_count, sym_count, sym_count_by_enumeration, Symmetry,
};

pub type EventId = usize;

/// A finite forest of events displayed into an arena.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Configuration {
    pub display: Vec<NodeId>,
    pub parent: Vec<Option<EventId>>,
}

/// A configuration with a second, dynamic, forest order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Augmentation {
    pub display: Vec<NodeId>,
    pub static_parent: Vec<Option<EventId>>,
    pub dyn_parent: Vec<Option<EventId>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    Display,
    Forest,
    DynamicForest,
    MinimalityRespecting,
    CausalityPreserving,
    RuleAbiding,
    Courteous,
    Deterministic,
    PlusCovered,
    Negative,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Display => "display",
            Condition::Forest => "forest",
            Condition::DynamicForest => "dynamic-forest",
            Condition::MinimalityRespecting => "minimality-respecting",
            Condition::CausalityPreserving => "causality-preserving",
            Condition::RuleAbiding => "rule-abiding",
            Condition::Courteous => "courteous",
            Condition::Deterministic => "deterministic",
            Condition::PlusCovered => "+-covered",
            Condition::Negative => "negative",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{condition} violated at events {events:?}")]
pub struct ValidityError {
    pub condition: Condition,
    pub events: Vec<EventId>,
}

fn fail<T>(condition: Condition, events: Vec<EventId>) -> Result<T, ValidityError> {
    Err(ValidityError { condition, events })
}

/// Children lists of a parent-pointer forest.
pub fn children_of(parent: &[Option<EventId>]) -> (Vec<Vec<EventId>>, Vec<EventId>) {
    let mut kids = vec![Vec::new(); parent.len()];
    let mut roots = Vec::new();
    for (e, p) in parent.iter().enumerate() {
        match p {
            Some(p) => kids[*p].push(e),
            None => roots.push(e),
        }
    }
    (kids, roots)
}

fn check_forest(parent: &[Option<EventId>], cond: Condition) -> Result<(), ValidityError> {
    let n = parent.len();
    for e in 0..n {
        let mut cur = e;
        let mut steps = 0;
        while let Some(p) = parent[cur] {
            if p >= n {
                return fail(cond, vec![e]);
            }
            cur = p;
            steps += 1;
            if steps > n {
                return fail(cond, vec![e]);
            }
        }
    }
    Ok(())
}

/// Depth of every event in a parent-pointer forest.
pub(crate) fn depths(parent: &[Option<EventId>]) -> Vec<usize> {
    let mut d = vec![usize::MAX; parent.len()];
    fn go(e: EventId, parent: &[Option<EventId>], d: &mut [usize]) -> usize {
        if d[e] != usize::MAX {
            return d[e];
        }
        let v = match parent[e] {
            None => 0,
            Some(p) => go(p, parent, d) + 1,
        };
        d[e] = v;
        v
    }
    for e in 0..parent.len() {
        go(e, parent, &mut d);
    }
    d
}

fn is_ancestor(parent: &[Option<EventId>], anc: EventId, mut e: EventId) -> bool {
    while let Some(p) = parent[e] {
        if p == anc {
            return true;
        }
        e = p;
    }
    false
}

impl Configuration {
    pub fn empty() -> Configuration {
        Configuration::default()
    }

    pub fn len(&self) -> usize {
        self.display.len()
    }

    pub fn is_empty(&self) -> bool {
        self.display.is_empty()
    }

    pub fn roots(&self) -> Vec<EventId> {
        children_of(&self.parent).1
    }

    pub fn is_pointed(&self) -> bool {
        self.roots().len() == 1
    }

    pub fn validate(&self, arena: &Arena) -> Result<(), ValidityError> {
        if self.parent.len() != self.display.len() {
            return fail(Condition::Display, vec![]);
        }
        for (e, &d) in self.display.iter().enumerate() {
            if d >= arena.len() {
                return fail(Condition::Display, vec![e]);
            }
        }
        check_forest(&self.parent, Condition::Forest)?;
        for e in 0..self.len() {
            let d = self.display[e];
            match self.parent[e] {
                None => {
                    if !arena.is_root(d) {
                        return fail(Condition::MinimalityRespecting, vec![e]);
                    }
                }
                Some(p) => {
                    if arena.parent(d) != Some(self.display[p]) {
                        return fail(Condition::CausalityPreserving, vec![p, e]);
                    }
                }
            }
        }
        Ok(())
    }

    /// Disjoint union; `y`'s displays are shifted by `offset` (for a tensor,
    /// the size of the first arena; for `x * y`, zero).
    pub fn disjoint_union(x: &Configuration, y: &Configuration, offset: usize) -> Configuration {
        let n = x.len();
        let mut out = x.clone();
        out.display.extend(y.display.iter().map(|d| d + offset));
        out.parent.extend(y.parent.iter().map(|p| p.map(|p| p + n)));
        out
    }

    /// `x ⊗ y` on `A ⊗ B`, where `a_len = |A|`.
    pub fn tensor(x: &Configuration, y: &Configuration, a_len: usize) -> Configuration {
        Configuration::disjoint_union(x, y, a_len)
    }

    /// `x ⊢ y` on `A ⊢ B`.
    pub fn hom_pair(x: &Configuration, y: &Configuration, a_len: usize) -> Configuration {
        Configuration::disjoint_union(x, y, a_len)
    }

    /// `x * y` on a common arena.
    pub fn union_star(x: &Configuration, y: &Configuration) -> Configuration {
        Configuration::disjoint_union(x, y, 0)
    }

    /// Sub-configuration on a down-closed set of events, renumbered in order.
    pub fn restrict(&self, keep: &[bool]) -> Configuration {
        let (index, _) = renumber(keep);
        let mut out = Configuration::empty();
        for e in 0..self.len() {
            if keep[e] {
                out.display.push(self.display[e]);
                out.parent.push(self.parent[e].map(|p| index[p].expect("not down-closed")));
            }
        }
        out
    }

    /// Events displayed to nodes in `lo..hi`, displays shifted down by `lo`.
    pub fn project(&self, lo: NodeId, hi: NodeId) -> Configuration {
        let keep: Vec<bool> = self.display.iter().map(|&d| lo <= d && d < hi).collect();
        let mut c = self.restrict(&keep);
        for d in c.display.iter_mut() {
            *d -= lo;
        }
        c
    }
}

fn renumber(keep: &[bool]) -> (Vec<Option<usize>>, usize) {
    let mut index = vec![None; keep.len()];
    let mut k = 0;
    for (e, &b) in keep.iter().enumerate() {
        if b {
            index[e] = Some(k);
            k += 1;
        }
    }
    (index, k)
}

impl Augmentation {
    pub fn empty() -> Augmentation {
        Augmentation::default()
    }

    pub fn len(&self) -> usize {
        self.display.len()
    }

    pub fn is_empty(&self) -> bool {
        self.display.is_empty()
    }

    /// The underlying configuration ⌊q⌋.
    pub fn desequentialize(&self) -> Configuration {
        Configuration { display: self.display.clone(), parent: self.static_parent.clone() }
    }

    pub fn dyn_roots(&self) -> Vec<EventId> {
        children_of(&self.dyn_parent).1
    }

    pub fn is_pointed(&self) -> bool {
        self.dyn_roots().len() == 1
    }

    pub fn polarity(&self, arena: &Arena, e: EventId) -> Polarity {
        arena.polarity(self.display[e])
    }

    pub fn validate(&self, arena: &Arena) -> Result<(), ValidityError> {
        if self.dyn_parent.len() != self.display.len() {
            return fail(Condition::Display, vec![]);
        }
        self.desequentialize().validate(arena)?;
        check_forest(&self.dyn_parent, Condition::DynamicForest)?;
        let n = self.len();
        let pol = |e: EventId| arena.polarity(self.display[e]);
        for e in 0..n {
            if let Some(s) = self.static_parent[e] {
                if !is_ancestor(&self.dyn_parent, s, e) {
                    return fail(Condition::RuleAbiding, vec![s, e]);
                }
            }
        }
        for e in 0..n {
            if let Some(d) = self.dyn_parent[e] {
                if (pol(d) == Polarity::Pos || pol(e) == Polarity::Neg) && self.static_parent[e] != Some(d) {
                    return fail(Condition::Courteous, vec![d, e]);
                }
            }
        }
        let (kids, roots) = children_of(&self.dyn_parent);
        for e in 0..n {
            if pol(e) == Polarity::Neg {
                let pos: Vec<EventId> = kids[e].iter().copied().filter(|&c| pol(c) == Polarity::Pos).collect();
                if pos.len() > 1 {
                    let mut w = vec![e];
                    w.extend(pos);
                    return fail(Condition::Deterministic, w);
                }
            }
            if kids[e].is_empty() && pol(e) != Polarity::Pos {
                return fail(Condition::PlusCovered, vec![e]);
            }
        }
        for r in roots {
            if pol(r) != Polarity::Neg {
                return fail(Condition::Negative, vec![r]);
            }
        }
        Ok(())
    }

    /// Concatenation of event sets: `q * p` (or a tensor once displays are
    /// shifted by the caller).
    pub fn disjoint_union(q: &Augmentation, p: &Augmentation) -> Augmentation {
        let n = q.len();
        let mut out = q.clone();
        out.display.extend(p.display.iter().copied());
        out.static_parent.extend(p.static_parent.iter().map(|x| x.map(|x| x + n)));
        out.dyn_parent.extend(p.dyn_parent.iter().map(|x| x.map(|x| x + n)));
        out
    }

    pub fn map_display(&self, f: impl Fn(NodeId) -> NodeId) -> Augmentation {
        Augmentation {
            display: self.display.iter().map(|&d| f(d)).collect(),
            static_parent: self.static_parent.clone(),
            dyn_parent: self.dyn_parent.clone(),
        }
    }

    /// Restriction to a set of events closed under both orders.
    pub fn restrict(&self, keep: &[bool]) -> Augmentation {
        let (index, _) = renumber(keep);
        let mut out = Augmentation::empty();
        for e in 0..self.len() {
            if keep[e] {
                out.display.push(self.display[e]);
                out.static_parent.push(self.static_parent[e].map(|p| index[p].expect("not closed")));
                out.dyn_parent.push(self.dyn_parent[e].map(|p| index[p].expect("not closed")));
            }
        }
        out
    }

    /// Projection of ⌊q⌋ on the nodes `lo..hi`.
    pub fn project(&self, lo: NodeId, hi: NodeId) -> Configuration {
        self.desequentialize().project(lo, hi)
    }

    /// Apply an event permutation: event `e` becomes `perm[e]`.
    pub fn relabel(&self, perm: &[EventId]) -> Augmentation {
        let n = self.len();
        let mut out = Augmentation {
            display: vec![0; n],
            static_parent: vec![None; n],
            dyn_parent: vec![None; n],
        };
        for e in 0..n {
            out.display[perm[e]] = self.display[e];
            out.static_parent[perm[e]] = self.static_parent[e].map(|p| perm[p]);
            out.dyn_parent[perm[e]] = self.dyn_parent[e].map(|p| perm[p]);
        }
        out
    }

    /// Split into the pointed components under each dynamic root.
    pub fn components(&self) -> Vec<Augmentation> {
        let roots = self.dyn_roots();
        let mut owner = vec![usize::MAX; self.len()];
        for e in 0..self.len() {
            let mut cur = e;
            while let Some(p) = self.dyn_parent[cur] {
                cur = p;
            }
            owner[e] = roots.iter().position(|&r| r == cur).unwrap();
        }
        (0..roots.len())
            .map(|i| {
                let keep: Vec<bool> = owner.iter().map(|&o| o == i).collect();
                self.restrict(&keep)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::interpret_type;
    use crate::syntax::parse_type;

    /// The augmentation of the running example, written out by hand.
    fn running_example() -> (Arena, Augmentation) {
        let a = interpret_type(&parse_type("((o->o)->(o->o)->o)->o").unwrap());
        let root = a.roots()[0];
        let f = a.children(root)[0];
        let g1 = a.children(f)[0];
        let g2 = a.children(f)[1];
        let x1 = a.children(g1)[0];
        // events: 0 root, 1 f, 2 g1, 3 g1, 4 g2, 5 x, 6 x, 7 inner f
        let q = Augmentation {
            display: vec![root, f, g1, g1, g2, x1, x1, f],
            static_parent: vec![None, Some(0), Some(1), Some(1), Some(1), Some(2), Some(3), Some(0)],
            dyn_parent: vec![None, Some(0), Some(1), Some(1), Some(1), Some(2), Some(3), Some(4)],
        };
        (a, q)
    }

    #[test]
    fn running_example_is_valid() {
        let (a, q) = running_example();
        q.validate(&a).unwrap();
        assert!(q.is_pointed());
    }

    #[test]
    fn reversed_edge_is_rejected() {
        let (a, mut q) = running_example();
        q.dyn_parent[1] = Some(2);
        q.dyn_parent[2] = Some(0);
        assert!(q.validate(&a).is_err());
    }

    #[test]
    fn empty_is_valid() {
        let a = interpret_type(&parse_type("o").unwrap());
        Augmentation::empty().validate(&a).unwrap();
    }

    #[test]
    fn each_condition_detected() {
        let (a, q) = running_example();
        let mut m = q.clone();
        m.dyn_parent[7] = Some(1);
        m.static_parent[7] = Some(0);
        assert_eq!(m.validate(&a).unwrap_err().condition, Condition::Courteous);
        let mut m = q.clone();
        m.display.truncate(7);
        m.static_parent.truncate(7);
        m.dyn_parent.truncate(7);
        m.display[6] = m.display[4];
        m.static_parent[6] = Some(1);
        m.dyn_parent[6] = Some(1);
        assert!(m.validate(&a).is_err());
    }
}
