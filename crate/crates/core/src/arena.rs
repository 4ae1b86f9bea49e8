//! Polarized forests interpreting types and contexts.
//!
//! Nodes are numbered densely. Constructions fix a layout so that the
//! numbering is predictable: `tensor(a, b)` lists the nodes of `a` then those
//! of `b`, and `arrow(a, b)` for pointed `b` lists the (dualized) nodes of `a`
//! then those of `b`, the roots of `a` becoming the first children of the
//! root of `b`. With this layout `A⃗ → o` and `(A1 ⊗ … ⊗ An) ⇒ o` coincide,
//! and tensor is strictly associative and unital.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{Context, SimpleType};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Neg,
    Pos,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Neg => Polarity::Pos,
            Polarity::Pos => Polarity::Neg,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Neg => "-",
            Polarity::Pos => "+",
        })
    }
}

/// Path to a node: index among the roots, then child indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArenaAddress(pub Vec<u32>);

impl fmt::Display for ArenaAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    parent: Vec<Option<NodeId>>,
    polarity: Vec<Polarity>,
    children: Vec<Vec<NodeId>>,
    roots: Vec<NodeId>,
}

impl Arena {
    pub fn empty() -> Arena {
        Arena { parent: vec![], polarity: vec![], children: vec![], roots: vec![] }
    }

    /// The arena `o`: one negative node.
    pub fn base() -> Arena {
        Arena {
            parent: vec![None],
            polarity: vec![Polarity::Neg],
            children: vec![vec![]],
            roots: vec![0],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, n: NodeId) -> Option<NodeId> {
        self.parent[n]
    }

    pub fn polarity(&self, n: NodeId) -> Polarity {
        self.polarity[n]
    }

    pub fn children(&self, n: NodeId) -> &[NodeId] {
        &self.children[n]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn is_root(&self, n: NodeId) -> bool {
        self.parent[n].is_none()
    }

    pub fn is_pointed(&self) -> bool {
        self.roots.len() == 1
    }

    pub fn is_negative(&self) -> bool {
        self.roots.iter().all(|&r| self.polarity[r] == Polarity::Neg)
    }

    pub fn depth(&self, n: NodeId) -> usize {
        let mut d = 0;
        let mut cur = n;
        while let Some(p) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        d
    }

    /// Append `other`, shifting its ids; returns the offset used.
    fn append(&mut self, other: &Arena, flip: bool) -> usize {
        let off = self.len();
        for n in 0..other.len() {
            self.parent.push(other.parent[n].map(|p| p + off));
            let pol = other.polarity[n];
            self.polarity.push(if flip { pol.flip() } else { pol });
            self.children.push(other.children[n].iter().map(|c| c + off).collect());
        }
        off
    }

    pub fn tensor(a: &Arena, b: &Arena) -> Arena {
        let mut out = a.clone();
        let off = out.append(b, false);
        out.roots.extend(b.roots.iter().map(|r| r + off));
        out
    }

    pub fn tensor_all<'a>(parts: impl IntoIterator<Item = &'a Arena>) -> Arena {
        parts.into_iter().fold(Arena::empty(), |acc, a| Arena::tensor(&acc, a))
    }

    pub fn dual(a: &Arena) -> Arena {
        let mut out = a.clone();
        for p in out.polarity.iter_mut() {
            *p = p.flip();
        }
        out
    }

    /// `A ⊢ B`, that is `A^⊥ ⊗ B`.
    pub fn hom(a: &Arena, b: &Arena) -> Arena {
        Arena::tensor(&Arena::dual(a), b)
    }

    /// The subtree rooted at `r`, renumbered in increasing id order.
    pub fn subtree(&self, r: NodeId) -> Arena {
        let mut members = Vec::new();
        let mut stack = vec![r];
        while let Some(n) = stack.pop() {
            members.push(n);
            stack.extend(self.children[n].iter().copied());
        }
        members.sort_unstable();
        let index = |n: NodeId| members.binary_search(&n).unwrap();
        let mut out = Arena::empty();
        for &n in &members {
            out.parent.push(if n == r { None } else { self.parent[n].map(index) });
            out.polarity.push(self.polarity[n]);
            out.children.push(self.children[n].iter().map(|&c| index(c)).collect());
        }
        out.roots.push(index(r));
        out
    }

    pub fn arrow(a: &Arena, b: &Arena) -> Arena {
        if b.is_pointed() {
            let mut out = Arena::empty();
            out.append(a, true);
            let off = out.append(b, false);
            let root = b.roots[0] + off;
            let mut kids: Vec<NodeId> = a.roots.clone();
            for &r in &a.roots {
                out.parent[r] = Some(root);
            }
            kids.extend(out.children[root].iter().copied());
            out.children[root] = kids;
            out.roots.push(root);
            out
        } else {
            let parts: Vec<Arena> = b.roots.iter().map(|&r| Arena::arrow(a, &b.subtree(r))).collect();
            Arena::tensor_all(parts.iter())
        }
    }

    pub fn address(&self, n: NodeId) -> ArenaAddress {
        let mut path = Vec::new();
        let mut cur = n;
        loop {
            match self.parent[cur] {
                Some(p) => {
                    let i = self.children[p].iter().position(|&c| c == cur).unwrap();
                    path.push(i as u32);
                    cur = p;
                }
                None => {
                    let i = self.roots.iter().position(|&c| c == cur).unwrap();
                    path.push(i as u32);
                    break;
                }
            }
        }
        path.reverse();
        ArenaAddress(path)
    }

    pub fn node_at(&self, addr: &ArenaAddress) -> Option<NodeId> {
        let (first, rest) = addr.0.split_first()?;
        let mut cur = *self.roots.get(*first as usize)?;
        for &i in rest {
            cur = *self.children[cur].get(i as usize)?;
        }
        Some(cur)
    }

    /// Forest shape and alternation.
    pub fn validate(&self) -> Result<(), String> {
        for n in 0..self.len() {
            match self.parent[n] {
                Some(p) => {
                    if self.polarity[p] == self.polarity[n] {
                        return Err(format!("node {n} has the polarity of its parent"));
                    }
                    if !self.children[p].contains(&n) {
                        return Err(format!("node {n} missing from its parent's children"));
                    }
                }
                None => {
                    if !self.roots.contains(&n) {
                        return Err(format!("node {n} is parentless but not a root"));
                    }
                }
            }
            if self.depth(n) > self.len() {
                return Err("cycle".into());
            }
        }
        Ok(())
    }
}

pub fn interpret_type(t: &SimpleType) -> Arena {
    match t {
        SimpleType::Base => Arena::base(),
        SimpleType::Arrow(a, b) => Arena::arrow(&interpret_type(a), &interpret_type(b)),
    }
}

/// `⟦A1⟧ ⊗ … ⊗ ⟦An⟧`.
pub fn interpret_types(ts: &[SimpleType]) -> Arena {
    let parts: Vec<Arena> = ts.iter().map(interpret_type).collect();
    Arena::tensor_all(parts.iter())
}

pub fn interpret_context(ctx: &Context) -> Arena {
    interpret_types(&ctx.types())
}

/// Node offset of each component in `⟦A1⟧ ⊗ … ⊗ ⟦An⟧`, plus the total.
pub fn component_offsets(ts: &[SimpleType]) -> Vec<usize> {
    let mut out = Vec::with_capacity(ts.len() + 1);
    let mut acc = 0;
    out.push(0);
    for t in ts {
        acc += t.atoms();
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn ty(s: &str) -> SimpleType {
        parse_type(s).unwrap()
    }

    #[test]
    fn small_arrows() {
        let a = interpret_type(&ty("o->o"));
        assert_eq!(a.len(), 2);
        assert_eq!(a.roots().len(), 1);
        let r = a.roots()[0];
        assert_eq!(a.polarity(r), Polarity::Neg);
        assert_eq!(a.children(r).len(), 1);
        assert_eq!(a.polarity(a.children(r)[0]), Polarity::Pos);
        assert!(Arena::arrow(&a, &Arena::empty()).is_empty());
    }

    #[test]
    fn chain_for_second_order() {
        let a = interpret_type(&ty("(o->o)->o"));
        let r = a.roots()[0];
        let c = a.children(r)[0];
        let g = a.children(c)[0];
        assert_eq!(
            [a.polarity(r), a.polarity(c), a.polarity(g)],
            [Polarity::Neg, Polarity::Pos, Polarity::Neg]
        );
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn running_example_arena() {
        let a = interpret_type(&ty("((o->o)->(o->o)->o)->o"));
        assert_eq!(a.len(), 6);
        a.validate().unwrap();
        let r = a.roots()[0];
        assert_eq!(a.children(r).len(), 1);
        let f = a.children(r)[0];
        assert_eq!(a.polarity(f), Polarity::Pos);
        assert_eq!(a.children(f).len(), 2);
        for &g in a.children(f) {
            assert_eq!(a.polarity(g), Polarity::Neg);
            assert_eq!(a.children(g).len(), 1);
            assert_eq!(a.polarity(a.children(g)[0]), Polarity::Pos);
        }
    }

    #[test]
    fn hom_roots() {
        let h = Arena::hom(&Arena::base(), &Arena::base());
        assert_eq!(h.polarity(h.roots()[0]), Polarity::Pos);
        assert_eq!(h.polarity(h.roots()[1]), Polarity::Neg);
    }

    #[test]
    fn uncurried_layout_coincides() {
        // (o->o) ⊗ o ⇒ o has the same numbering as (o->o)->o->o
        let doms = interpret_types(&[ty("o->o"), ty("o")]);
        let a = Arena::arrow(&doms, &Arena::base());
        assert_eq!(a, interpret_type(&ty("(o->o)->o->o")));
    }

    #[test]
    fn addresses_round_trip() {
        let a = interpret_types(&[ty("((o->o)->o)->o"), ty("o->o->o")]);
        for n in 0..a.len() {
            assert_eq!(a.node_at(&a.address(n)), Some(n));
        }
    }
}
