//! Canonical codes for forests, positions and isogmentations.
//!
//! A forest is serialized as `[number of roots, root codes…]` where a node code
//! is `[labels…, number of children, child codes…]` and sibling codes are
//! sorted. The encoding is a prefix code, so keys can be decoded back into a
//! representative.

use std::fmt;

use super::{children_of, depths, Augmentation, Configuration, EventId};

/// Subtree codes of every node, given a fixed-width label per node.
pub(crate) fn subtree_codes(parent: &[Option<EventId>], label: impl Fn(EventId) -> Vec<u32>) -> (Vec<Vec<u32>>, Vec<EventId>) {
    let n = parent.len();
    let (kids, roots) = children_of(parent);
    let d = depths(parent);
    let mut order: Vec<EventId> = (0..n).collect();
    order.sort_by_key(|&e| std::cmp::Reverse(d[e]));
    let mut codes: Vec<Vec<u32>> = vec![Vec::new(); n];
    for e in order {
        let mut cs: Vec<&Vec<u32>> = kids[e].iter().map(|&c| &codes[c]).collect();
        cs.sort();
        let mut code = label(e);
        code.push(kids[e].len() as u32);
        for c in cs {
            code.extend_from_slice(c);
        }
        codes[e] = code;
    }
    (codes, roots)
}

fn forest_code(parent: &[Option<EventId>], label: impl Fn(EventId) -> Vec<u32>) -> Vec<u32> {
    let (codes, roots) = subtree_codes(parent, label);
    let mut rs: Vec<&Vec<u32>> = roots.iter().map(|&r| &codes[r]).collect();
    rs.sort();
    let mut out = vec![roots.len() as u32];
    for c in rs {
        out.extend_from_slice(c);
    }
    out
}

/// Decode a forest code into `(labels, parent)` in preorder.
fn decode_forest(code: &[u32], width: usize) -> (Vec<Vec<u32>>, Vec<Option<EventId>>) {
    let mut labels = Vec::new();
    let mut parent = Vec::new();
    let mut pos = 0;
    fn node(code: &[u32], width: usize, pos: &mut usize, up: Option<EventId>, labels: &mut Vec<Vec<u32>>, parent: &mut Vec<Option<EventId>>) {
        let me = labels.len();
        labels.push(code[*pos..*pos + width].to_vec());
        parent.push(up);
        *pos += width;
        let k = code[*pos];
        *pos += 1;
        for _ in 0..k {
            node(code, width, pos, Some(me), labels, parent);
        }
    }
    let roots = code[pos];
    pos += 1;
    for _ in 0..roots {
        node(code, width, &mut pos, None, &mut labels, &mut parent);
    }
    assert_eq!(pos, code.len(), "trailing data in forest code");
    (labels, parent)
}

/// Canonical key of a position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PosKey(pub Vec<u32>);

/// Canonical key of an isogmentation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IsoKey(pub Vec<u32>);

impl fmt::Display for PosKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for IsoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub key: PosKey,
    pub representative: Configuration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isogmentation {
    pub key: IsoKey,
    pub representative: Augmentation,
}

impl PosKey {
    pub fn of(x: &Configuration) -> PosKey {
        PosKey(forest_code(&x.parent, |e| vec![x.display[e] as u32]))
    }

    pub fn empty() -> PosKey {
        PosKey(vec![0])
    }

    pub fn representative(&self) -> Configuration {
        let (labels, parent) = decode_forest(&self.0, 1);
        Configuration { display: labels.iter().map(|l| l[0] as usize).collect(), parent }
    }

    pub fn len(&self) -> usize {
        // every node contributes a label and a child count
        (self.0.len() - 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 1
    }
}

impl IsoKey {
    pub fn of(q: &Augmentation) -> IsoKey {
        let d = depths(&q.dyn_parent);
        IsoKey(forest_code(&q.dyn_parent, |e| {
            let off = match q.static_parent[e] {
                Some(s) => d[e] - d[s],
                None => 0,
            };
            vec![q.display[e] as u32, off as u32]
        }))
    }

    pub fn empty() -> IsoKey {
        IsoKey(vec![0])
    }

    pub fn representative(&self) -> Augmentation {
        let (labels, dyn_parent) = decode_forest(&self.0, 2);
        let static_parent = (0..labels.len())
            .map(|e| {
                let off = labels[e][1];
                if off == 0 {
                    return None;
                }
                let mut cur = e;
                for _ in 0..off {
                    cur = dyn_parent[cur].expect("offset beyond the dynamic root");
                }
                Some(cur)
            })
            .collect();
        Augmentation { display: labels.iter().map(|l| l[0] as usize).collect(), static_parent, dyn_parent }
    }

    pub fn len(&self) -> usize {
        (self.0.len() - 1) / 3
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 1
    }

    /// Number of dynamic roots.
    pub fn components(&self) -> usize {
        self.0[0] as usize
    }

    pub fn is_pointed(&self) -> bool {
        self.components() == 1
    }
}

pub fn canonicalize(q: &Augmentation) -> Isogmentation {
    let key = IsoKey::of(q);
    let representative = key.representative();
    Isogmentation { key, representative }
}

pub fn canonicalize_position(x: &Configuration) -> Position {
    let key = PosKey::of(x);
    let representative = key.representative();
    Position { key, representative }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Augmentation {
        Augmentation {
            display: vec![0, 1, 2, 2, 3, 4, 4, 1],
            static_parent: vec![None, Some(0), Some(1), Some(1), Some(1), Some(2), Some(3), Some(0)],
            dyn_parent: vec![None, Some(0), Some(1), Some(1), Some(1), Some(2), Some(3), Some(4)],
        }
    }

    #[test]
    fn relabeling_preserves_key() {
        let q = sample();
        let perm = [3, 7, 0, 5, 1, 2, 6, 4];
        assert_eq!(IsoKey::of(&q), IsoKey::of(&q.relabel(&perm)));
    }

    #[test]
    fn key_is_idempotent() {
        let q = sample();
        let iso = canonicalize(&q);
        assert_eq!(IsoKey::of(&iso.representative), iso.key);
        assert_eq!(iso.representative.len(), q.len());
        assert_eq!(iso.key.len(), 8);
    }

    #[test]
    fn static_offset_matters() {
        let q = sample();
        let mut m = q.clone();
        m.static_parent[7] = Some(4);
        m.display[7] = 9;
        let mut m2 = m.clone();
        m2.static_parent[7] = Some(1);
        assert_ne!(IsoKey::of(&m), IsoKey::of(&m2));
    }

    #[test]
    fn position_round_trip() {
        let x = sample().desequentialize();
        let k = PosKey::of(&x);
        assert_eq!(PosKey::of(&k.representative()), k);
        assert_eq!(k.len(), 8);
        assert!(PosKey::of(&Configuration::empty()).is_empty());
    }
}
