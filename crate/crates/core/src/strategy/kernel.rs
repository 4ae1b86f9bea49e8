//! Copycat-shaped structural strategies, instantiated on demand.
//!
//! Each kernel relates a coarse side and a fine side of its interface
//! through an arena map `proj` from fine nodes to coarse nodes. Its
//! instance at a fine position `w` is the copycat between `w` and its image,
//! with coefficient `1/|Sym(w)|`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::arena::{component_offsets, Arena, NodeId, Polarity};
use crate::causal::{children_of, sym_count, Augmentation, Configuration, IsoKey, PosKey};
use crate::syntax::SimpleType;

use super::{Coeff, Interface, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelKind {
    Id,
    PointedId,
    Delta(usize),
    Mu(usize),
    Swap,
    Proj(usize),
    /// An identity between two groupings of the same layout.
    Relabel(&'static str),
}

#[derive(Clone, Debug)]
pub struct Kernel {
    pub kind: KernelKind,
    pub iface: Arc<Interface>,
    pub fine: Side,
    proj: Vec<NodeId>,
    pub pointed_only: bool,
}

fn repeat(ts: &[SimpleType], n: usize) -> Vec<SimpleType> {
    (0..n).flat_map(|_| ts.iter().cloned()).collect()
}

impl Kernel {
    fn build(kind: KernelKind, left: Vec<SimpleType>, right: Vec<SimpleType>, fine: Side, proj: Vec<NodeId>) -> Kernel {
        let iface = Interface::new(left, right);
        let fine_len = match fine {
            Side::Left => iface.nl(),
            Side::Right => iface.nr(),
        };
        assert_eq!(proj.len(), fine_len);
        Kernel { kind, iface, fine, proj, pointed_only: false }
    }

    pub fn id(ts: &[SimpleType]) -> Kernel {
        let n: usize = ts.iter().map(SimpleType::atoms).sum();
        Kernel::build(KernelKind::Id, ts.to_vec(), ts.to_vec(), Side::Right, (0..n).collect())
    }

    pub fn pointed_id(ts: &[SimpleType]) -> Kernel {
        let mut k = Kernel::id(ts);
        k.kind = KernelKind::PointedId;
        k.pointed_only = true;
        k
    }

    /// `A ⊢ A^⊗n`.
    pub fn delta(ts: &[SimpleType], n: usize) -> Kernel {
        let m: usize = ts.iter().map(SimpleType::atoms).sum();
        let proj = (0..n * m).map(|i| i % m).collect();
        Kernel::build(KernelKind::Delta(n), ts.to_vec(), repeat(ts, n), Side::Right, proj)
    }

    /// `A^⊗n ⊢ A`.
    pub fn mu(ts: &[SimpleType], n: usize) -> Kernel {
        let m: usize = ts.iter().map(SimpleType::atoms).sum();
        let proj = (0..n * m).map(|i| i % m).collect();
        Kernel::build(KernelKind::Mu(n), repeat(ts, n), ts.to_vec(), Side::Left, proj)
    }

    pub fn eps(ts: &[SimpleType]) -> Kernel {
        Kernel::delta(ts, 0)
    }

    pub fn eta(ts: &[SimpleType]) -> Kernel {
        Kernel::mu(ts, 0)
    }

    /// `A ⊗ B ⊢ B ⊗ A`.
    pub fn swap(a: &[SimpleType], b: &[SimpleType]) -> Kernel {
        let na: usize = a.iter().map(SimpleType::atoms).sum();
        let nb: usize = b.iter().map(SimpleType::atoms).sum();
        let mut left = a.to_vec();
        left.extend(b.iter().cloned());
        let mut right = b.to_vec();
        right.extend(a.iter().cloned());
        let proj = (0..na + nb).map(|r| if r < nb { na + r } else { r - nb }).collect();
        Kernel::build(KernelKind::Swap, left, right, Side::Right, proj)
    }

    /// `Γ ⊢ Γ_i`.
    pub fn proj(ts: &[SimpleType], i: usize) -> Kernel {
        let offs = component_offsets(ts);
        let proj = (offs[i]..offs[i + 1]).collect();
        Kernel::build(KernelKind::Proj(i), ts.to_vec(), vec![ts[i].clone()], Side::Right, proj)
    }

    /// Identity between two type lists with the same arena.
    pub fn relabel(name: &'static str, left: &[SimpleType], right: &[SimpleType]) -> Kernel {
        let n: usize = right.iter().map(SimpleType::atoms).sum();
        let k = Kernel::build(KernelKind::Relabel(name), left.to_vec(), right.to_vec(), Side::Right, (0..n).collect());
        assert_eq!(k.iface.left_arena, k.iface.right_arena, "{name}: layouts differ");
        k
    }

    pub fn fine_arena(&self) -> &Arena {
        match self.fine {
            Side::Left => &self.iface.left_arena,
            Side::Right => &self.iface.right_arena,
        }
    }

    pub fn coarse_arena(&self) -> &Arena {
        match self.fine {
            Side::Left => &self.iface.right_arena,
            Side::Right => &self.iface.left_arena,
        }
    }

    /// Only the empty position exists on the fine side.
    pub fn is_finite(&self) -> bool {
        self.fine_arena().is_empty()
    }

    /// The copycat at fine position `w`, with its coefficient.
    pub fn instance(&self, w: &Configuration) -> Option<(Augmentation, Coeff)> {
        if self.pointed_only && !w.is_pointed() {
            return None;
        }
        let n = w.len();
        let nl = self.iface.nl();
        let fine = self.fine_arena();
        // fine copies are 0..n, coarse copies n..2n
        let (fine_disp, coarse_disp): (Box<dyn Fn(NodeId) -> NodeId>, Box<dyn Fn(NodeId) -> NodeId>) = match self.fine {
            Side::Right => (Box::new(move |d| nl + d), Box::new(|d| d)),
            Side::Left => (Box::new(|d| d), Box::new(move |d| nl + d)),
        };
        let (right_copy, left_copy): (usize, usize) = match self.fine {
            Side::Right => (0, n),
            Side::Left => (n, 0),
        };
        let mut q = Augmentation {
            display: vec![0; 2 * n],
            static_parent: vec![None; 2 * n],
            dyn_parent: vec![None; 2 * n],
        };
        for e in 0..n {
            let d = w.display[e];
            q.display[e] = fine_disp(d);
            q.display[n + e] = coarse_disp(self.proj[d]);
            let (r, l) = (right_copy + e, left_copy + e);
            let pr = w.parent[e].map(|p| right_copy + p);
            let pl = w.parent[e].map(|p| left_copy + p);
            q.static_parent[r] = pr;
            q.static_parent[l] = pl;
            match fine.polarity(d) {
                Polarity::Neg => {
                    q.dyn_parent[r] = pr;
                    q.dyn_parent[l] = Some(r);
                }
                Polarity::Pos => {
                    q.dyn_parent[l] = pl;
                    q.dyn_parent[r] = Some(l);
                }
            }
        }
        Some((q, Coeff::recip_of(&sym_count(w))))
    }

    /// Fine positions lying over the coarse position `x`.
    pub fn fiber(&self, x: &Configuration) -> Vec<Configuration> {
        let fine = self.fine_arena();
        let mut over: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for (n, &c) in self.proj.iter().enumerate() {
            over.entry(c).or_default().push(n);
        }
        let (kids, roots) = children_of(&x.parent);
        let mut order = Vec::with_capacity(x.len());
        let mut stack: Vec<usize> = roots.into_iter().rev().collect();
        while let Some(e) = stack.pop() {
            order.push(e);
            stack.extend(kids[e].iter().rev());
        }
        let mut out = BTreeMap::new();
        let mut choice = vec![usize::MAX; x.len()];
        fn go(
            i: usize,
            order: &[usize],
            x: &Configuration,
            fine: &Arena,
            over: &BTreeMap<NodeId, Vec<NodeId>>,
            choice: &mut Vec<usize>,
            out: &mut BTreeMap<PosKey, Configuration>,
        ) {
            if i == order.len() {
                let w = Configuration { display: choice.clone(), parent: x.parent.clone() };
                out.insert(PosKey::of(&w), w);
                return;
            }
            let e = order[i];
            let empty = Vec::new();
            for &n in over.get(&x.display[e]).unwrap_or(&empty) {
                let ok = match x.parent[e] {
                    None => fine.is_root(n),
                    Some(p) => fine.parent(n) == Some(choice[p]),
                };
                if ok {
                    choice[e] = n;
                    go(i + 1, order, x, fine, over, choice, out);
                }
            }
        }
        go(0, &order, x, fine, &over, &mut choice, &mut out);
        out.into_values().collect()
    }

    /// Instances at the given fine positions.
    pub fn at_fine(&self, ws: impl IntoIterator<Item = Configuration>) -> Strategy {
        let mut s = Strategy::zero(self.iface.clone());
        for w in ws {
            if let Some((q, c)) = self.instance(&w) {
                s.add_entry(IsoKey::of(&q), c);
            }
        }
        s
    }

    /// Instances over the given coarse positions.
    pub fn at_coarse(&self, xs: &BTreeSet<PosKey>) -> Strategy {
        let mut ws = BTreeMap::new();
        for x in xs {
            for w in self.fiber(&x.representative()) {
                ws.insert(PosKey::of(&w), w);
            }
        }
        self.at_fine(ws.into_values())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> SimpleType {
        SimpleType::Base
    }

    #[test]
    fn copycat_instances_are_valid() {
        let t = SimpleType::arrow(SimpleType::arrow(o(), o()), o());
        let k = Kernel::delta(std::slice::from_ref(&t), 2);
        let w = Configuration { display: vec![0, 1, 2, 3, 4], parent: vec![None, Some(0), Some(1), None, Some(3)] };
        let w = Configuration { display: w.display.iter().map(|d| [2, 1, 0, 5, 4][*d]).collect(), parent: w.parent };
        w.validate(k.fine_arena()).unwrap();
        let (q, c) = k.instance(&w).unwrap();
        q.validate(&k.iface.arena).unwrap();
        assert!(c.is_one());
    }

    #[test]
    fn fibers_of_delta() {
        let k = Kernel::delta(&[o()], 2);
        let x = Configuration { display: vec![0, 0], parent: vec![None, None] };
        // both in the first copy, both in the second, or split
        assert_eq!(k.fiber(&x).len(), 3);
        let e = Kernel::eps(&[o()]);
        assert!(e.is_finite());
        assert!(e.fiber(&x).is_empty());
        assert_eq!(e.fiber(&Configuration::empty()).len(), 1);
    }

    #[test]
    fn identity_weights() {
        let k = Kernel::id(&[o()]);
        let x = Configuration { display: vec![0, 0], parent: vec![None, None] };
        let (q, c) = k.instance(&x).unwrap();
        q.validate(&k.iface.arena).unwrap();
        assert_eq!(c, Coeff::ratio(1, 2));
        assert!(Kernel::pointed_id(&[o()]).instance(&x).is_none());
        assert!(Kernel::pointed_id(&[o()]).instance(&Configuration::empty()).is_none());
    }
}
