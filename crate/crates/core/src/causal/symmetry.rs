use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::One;

use super::canon::{subtree_codes, PosKey};
use super::{children_of, Configuration, EventId};

/// A display-preserving order-isomorphism; `map[e]` is the image of event `e`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symmetry {
    pub map: Vec<EventId>,
}

struct Side<'a> {
    codes: Vec<Vec<u32>>,
    kids: Vec<Vec<EventId>>,
    roots: Vec<EventId>,
    _x: &'a Configuration,
}

impl<'a> Side<'a> {
    fn new(x: &'a Configuration) -> Side<'a> {
        let (codes, roots) = subtree_codes(&x.parent, |e| vec![x.display[e] as u32]);
        let (kids, _) = children_of(&x.parent);
        Side { codes, kids, roots, _x: x }
    }
}

type Partial = Vec<(EventId, EventId)>;

fn product(a: Vec<Partial>, b: Vec<Partial>) -> Vec<Partial> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for l in &a {
        for r in &b {
            let mut m = l.clone();
            m.extend_from_slice(r);
            out.push(m);
        }
    }
    out
}

fn group<'s>(side: &'s Side, xs: &[EventId]) -> BTreeMap<&'s [u32], Vec<EventId>> {
    let mut g: BTreeMap<&[u32], Vec<EventId>> = BTreeMap::new();
    for &e in xs {
        g.entry(side.codes[e].as_slice()).or_default().push(e);
    }
    g
}

fn match_lists(sx: &Side, sy: &Side, xs: &[EventId], ys: &[EventId]) -> Vec<Partial> {
    let gx = group(sx, xs);
    let gy = group(sy, ys);
    if gx.len() != gy.len() || gx.iter().zip(&gy).any(|((cx, ex), (cy, ey))| cx != cy || ex.len() != ey.len()) {
        return Vec::new();
    }
    let mut acc: Vec<Partial> = vec![Vec::new()];
    for (ex, ey) in gx.values().zip(gy.values()) {
        let mut options = Vec::new();
        for perm in ey.iter().permutations(ey.len()) {
            let mut inner: Vec<Partial> = vec![Vec::new()];
            for (a, b) in ex.iter().zip(perm) {
                inner = product(inner, match_node(sx, sy, *a, *b));
            }
            options.extend(inner);
        }
        acc = product(acc, options);
    }
    acc
}

fn match_node(sx: &Side, sy: &Side, a: EventId, b: EventId) -> Vec<Partial> {
    let rest = match_lists(sx, sy, &sx.kids[a], &sy.kids[b]);
    rest.into_iter()
        .map(|mut m| {
            m.push((a, b));
            m
        })
        .collect()
}

/// All symmetries `x ≅ y`.
pub fn enumerate_symmetries(x: &Configuration, y: &Configuration) -> Vec<Symmetry> {
    if x.len() != y.len() {
        return Vec::new();
    }
    let sx = Side::new(x);
    let sy = Side::new(y);
    match_lists(&sx, &sy, &sx.roots, &sy.roots)
        .into_iter()
        .map(|pairs| {
            let mut map = vec![0; x.len()];
            for (a, b) in pairs {
                map[a] = b;
            }
            Symmetry { map }
        })
        .collect()
}

pub fn sym_count_by_enumeration(x: &Configuration) -> usize {
    enumerate_symmetries(x, x).len()
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `|Sym(x)|` as a product over sibling groups of `k! · aut(child)^k`.
pub fn sym_count(x: &Configuration) -> BigUint {
    let side = Side::new(x);
    fn aut(side: &Side, xs: &[EventId]) -> BigUint {
        let mut out = BigUint::one();
        for members in group(side, xs).values() {
            let child = aut(side, &side.kids[members[0]]);
            out *= factorial(members.len()) * child.pow(members.len() as u32);
        }
        out
    }
    aut(&side, &side.roots)
}

/// Number of ways to split `z` into a part isomorphic to `x` and a
/// complementary part isomorphic to `y`.
pub fn splitting_count(z: &Configuration, x: &Configuration, y: &Configuration) -> usize {
    let roots = z.roots();
    if roots.len() > 24 {
        panic!("too many root trees to enumerate splittings");
    }
    let kx = PosKey::of(x);
    let ky = PosKey::of(y);
    let mut owner = vec![0usize; z.len()];
    for (e, o) in owner.iter_mut().enumerate() {
        let mut cur = e;
        while let Some(p) = z.parent[cur] {
            cur = p;
        }
        *o = roots.iter().position(|&r| r == cur).unwrap();
    }
    let mut count = 0;
    for mask in 0u32..(1u32 << roots.len()) {
        let left: Vec<bool> = owner.iter().map(|&o| mask >> o & 1 == 1).collect();
        let right: Vec<bool> = left.iter().map(|b| !b).collect();
        if PosKey::of(&z.restrict(&left)) == kx && PosKey::of(&z.restrict(&right)) == ky {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(n: usize) -> Configuration {
        Configuration { display: vec![0; n], parent: vec![None; n] }
    }

    #[test]
    fn copies_of_the_base_question() {
        assert_eq!(enumerate_symmetries(&qs(1), &qs(1)).len(), 1);
        assert_eq!(enumerate_symmetries(&qs(2), &qs(2)).len(), 2);
        assert_eq!(enumerate_symmetries(&qs(3), &qs(3)).len(), 6);
        assert_eq!(sym_count(&qs(3)), BigUint::from(6u32));
        assert_eq!(sym_count(&Configuration::empty()), BigUint::one());
    }

    #[test]
    fn nested_groups() {
        // two roots, each with two identical children
        let x = Configuration {
            display: vec![0, 1, 1, 0, 1, 1],
            parent: vec![None, Some(0), Some(0), None, Some(3), Some(3)],
        };
        assert_eq!(sym_count(&x), BigUint::from(8u32));
        assert_eq!(sym_count_by_enumeration(&x), 8);
    }

    #[test]
    fn different_positions_have_no_symmetry() {
        let x = Configuration { display: vec![0, 1], parent: vec![None, Some(0)] };
        let y = Configuration { display: vec![0, 0], parent: vec![None, None] };
        assert!(enumerate_symmetries(&x, &y).is_empty());
    }

    #[test]
    fn splittings_of_two_questions() {
        assert_eq!(splitting_count(&qs(2), &qs(1), &qs(1)), 2);
        assert_eq!(splitting_count(&qs(3), &qs(1), &qs(2)), 3);
    }
}
