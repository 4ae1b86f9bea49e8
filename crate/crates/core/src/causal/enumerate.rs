//! Exhaustive generation of positions and augmentations up to a size bound.

use std::collections::BTreeMap;

use crate::arena::{Arena, NodeId, Polarity};

use super::canon::{IsoKey, PosKey};
use super::{Augmentation, Configuration, EventId};

#[derive(Clone, Debug)]
struct Tree {
    display: NodeId,
    offset: usize,
    children: Vec<Tree>,
}

impl Tree {
    fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }
}

/// All multisets drawn from `items` (each with a positive size) whose sizes
/// sum to at most `budget`, with their total sizes.
pub fn multisets<T: Clone>(items: &[(T, usize)], budget: usize) -> Vec<(Vec<T>, usize)> {
    fn go<T: Clone>(items: &[(T, usize)], start: usize, budget: usize, cur: &mut Vec<T>, used: usize, out: &mut Vec<(Vec<T>, usize)>) {
        out.push((cur.clone(), used));
        for i in start..items.len() {
            let (ref t, s) = items[i];
            if used + s <= budget {
                cur.push(t.clone());
                go(items, i, budget, cur, used + s, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(items, 0, budget, &mut Vec::new(), 0, &mut out);
    out
}

fn flatten(roots: &[Tree]) -> (Vec<NodeId>, Vec<Option<EventId>>, Vec<usize>) {
    let mut display = Vec::new();
    let mut parent = Vec::new();
    let mut offset = Vec::new();
    fn go(t: &Tree, up: Option<EventId>, display: &mut Vec<NodeId>, parent: &mut Vec<Option<EventId>>, offset: &mut Vec<usize>) {
        let me = display.len();
        display.push(t.display);
        parent.push(up);
        offset.push(t.offset);
        for c in &t.children {
            go(c, Some(me), display, parent, offset);
        }
    }
    for t in roots {
        go(t, None, &mut display, &mut parent, &mut offset);
    }
    (display, parent, offset)
}

fn position_trees(arena: &Arena, d: NodeId, budget: usize) -> Vec<(Tree, usize)> {
    if budget == 0 {
        return Vec::new();
    }
    let mut items = Vec::new();
    for &c in arena.children(d) {
        items.extend(position_trees(arena, c, budget - 1));
    }
    multisets(&items, budget - 1)
        .into_iter()
        .map(|(children, s)| (Tree { display: d, offset: 0, children }, s + 1))
        .collect()
}

/// Representatives of every position of `arena` with at most `max_events`
/// events, keyed canonically.
pub fn enumerate_positions(arena: &Arena, max_events: usize) -> BTreeMap<PosKey, Configuration> {
    let mut items = Vec::new();
    for &r in arena.roots() {
        items.extend(position_trees(arena, r, max_events));
    }
    let mut out = BTreeMap::new();
    for (roots, _) in multisets(&items, max_events) {
        let (display, parent, _) = flatten(&roots);
        let x = Configuration { display, parent };
        out.insert(PosKey::of(&x), x);
    }
    out
}

/// Negative-rooted dynamic subtrees. `chain` holds the displays of the
/// dynamic ancestors, negative events at even depths.
fn negative_trees(arena: &Arena, chain: &mut Vec<NodeId>, d: NodeId, offset: usize, budget: usize) -> Vec<(Tree, usize)> {
    if budget < 2 {
        return Vec::new();
    }
    let k = chain.len();
    let mut answers: Vec<(NodeId, usize)> = arena
        .roots()
        .iter()
        .copied()
        .filter(|&r| arena.polarity(r) == Polarity::Pos)
        .map(|r| (r, 0))
        .collect();
    chain.push(d);
    for j in (0..=k).step_by(2) {
        for &c in arena.children(chain[j]) {
            answers.push((c, k + 1 - j));
        }
    }
    let mut out = Vec::new();
    for (pd, poff) in answers {
        chain.push(pd);
        let mut items = Vec::new();
        for &c in arena.children(pd) {
            items.extend(negative_trees(arena, chain, c, 1, budget - 2));
        }
        chain.pop();
        for (children, s) in multisets(&items, budget - 2) {
            let p = Tree { display: pd, offset: poff, children };
            out.push((Tree { display: d, offset, children: vec![p] }, s + 2));
        }
    }
    chain.pop();
    out
}

/// Representatives of every isogmentation on `arena` with at most
/// `max_events` events; with `pointed_only`, those with one dynamic root.
pub fn enumerate_augmentations(arena: &Arena, max_events: usize, pointed_only: bool) -> BTreeMap<IsoKey, Augmentation> {
    let mut items = Vec::new();
    for &r in arena.roots() {
        if arena.polarity(r) == Polarity::Neg {
            items.extend(negative_trees(arena, &mut Vec::new(), r, 0, max_events));
        }
    }
    let forests: Vec<Vec<Tree>> = if pointed_only {
        items.into_iter().map(|(t, _)| vec![t]).collect()
    } else {
        multisets(&items, max_events).into_iter().map(|(f, _)| f).collect()
    };
    let mut out = BTreeMap::new();
    for roots in forests {
        debug_assert!(roots.iter().map(Tree::size).sum::<usize>() <= max_events);
        let (display, dyn_parent, offset) = flatten(&roots);
        let static_parent = (0..display.len())
            .map(|e| {
                if offset[e] == 0 {
                    return None;
                }
                let mut cur = e;
                for _ in 0..offset[e] {
                    cur = dyn_parent[cur].unwrap();
                }
                Some(cur)
            })
            .collect();
        let q = Augmentation { display, static_parent, dyn_parent };
        out.insert(IsoKey::of(&q), q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::interpret_type;
    use crate::syntax::parse_type;

    #[test]
    fn multiset_counts() {
        let items = vec![('a', 1), ('b', 1)];
        // sizes 0..=2 over two letters: 1 + 2 + 3
        assert_eq!(multisets(&items, 2).len(), 6);
    }

    #[test]
    fn positions_of_base() {
        let ps = enumerate_positions(&Arena::base(), 3);
        assert_eq!(ps.len(), 4);
    }

    #[test]
    fn augmentations_are_valid() {
        let a = interpret_type(&parse_type("((o->o)->o)->o").unwrap());
        let all = enumerate_augmentations(&a, 6, false);
        assert!(!all.is_empty());
        for (k, q) in &all {
            q.validate(&a).unwrap();
            assert_eq!(&IsoKey::of(q), k);
        }
    }
}
