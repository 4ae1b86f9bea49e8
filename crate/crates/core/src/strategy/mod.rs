//! Weighted isogmentations, their composition and the structural kernels.

mod coeff;
mod expr;
mod fuzz;
mod interaction;
mod kernel;
pub mod laws;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::arena::{interpret_types, Arena};
use crate::causal::{canonicalize, enumerate_symmetries, Augmentation, IsoKey, PosKey};
use crate::correspondence::{curry_aug, uncurry_aug};
use crate::syntax::SimpleType;

pub use coeff::Coeff;
pub use fuzz::{fuzz_interactions, FuzzReport};
pub use expr::{bounded, evaluate, windowed_equal, Demand, Expr, LawMismatch, WindowTooSmall};
pub use interaction::{compose_aug, hide, interact, DeadlockDetected, Gluing, Interaction, Origin};
pub use kernel::{Kernel, KernelKind, Side};

/// `⊗left ⊢ ⊗right`, both sides given as lists of types.
#[derive(Clone, Debug)]
pub struct Interface {
    pub left: Vec<SimpleType>,
    pub right: Vec<SimpleType>,
    pub left_arena: Arena,
    pub right_arena: Arena,
    pub arena: Arena,
}

impl PartialEq for Interface {
    fn eq(&self, o: &Interface) -> bool {
        self.left == o.left && self.right == o.right
    }
}

impl Eq for Interface {}

impl Interface {
    pub fn new(left: Vec<SimpleType>, right: Vec<SimpleType>) -> Arc<Interface> {
        let left_arena = interpret_types(&left);
        let right_arena = interpret_types(&right);
        let arena = Arena::hom(&left_arena, &right_arena);
        Arc::new(Interface { left, right, left_arena, right_arena, arena })
    }

    pub fn nl(&self) -> usize {
        self.left_arena.len()
    }

    pub fn nr(&self) -> usize {
        self.right_arena.len()
    }

    /// Same node layout, possibly grouped differently into types.
    pub fn same_layout(&self, o: &Interface) -> bool {
        self.arena == o.arena && self.nl() == o.nl()
    }
}

impl fmt::Display for Interface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |ts: &[SimpleType]| {
            if ts.is_empty() {
                "1".to_string()
            } else {
                ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" * ")
            }
        };
        write!(f, "{} |- {}", show(&self.left), show(&self.right))
    }
}

/// Finite-support strategy: canonical keys with non-zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    iface: Arc<Interface>,
    table: BTreeMap<IsoKey, Coeff>,
}

impl Strategy {
    pub fn zero(iface: Arc<Interface>) -> Strategy {
        Strategy { iface, table: BTreeMap::new() }
    }

    pub fn single(iface: Arc<Interface>, q: &Augmentation, c: Coeff) -> Strategy {
        let mut s = Strategy::zero(iface);
        s.add_entry(canonicalize(q).key, c);
        s
    }

    pub fn from_entries(iface: Arc<Interface>, entries: impl IntoIterator<Item = (IsoKey, Coeff)>) -> Strategy {
        let mut s = Strategy::zero(iface);
        for (k, c) in entries {
            s.add_entry(k, c);
        }
        s
    }

    pub fn interface(&self) -> &Arc<Interface> {
        &self.iface
    }

    pub fn add_entry(&mut self, k: IsoKey, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.table.entry(k).or_insert_with(Coeff::zero);
        *slot = &*slot + &c;
    }

    pub fn get(&self, k: &IsoKey) -> Coeff {
        self.table.get(k).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IsoKey, &Coeff)> {
        self.table.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &IsoKey> {
        self.table.keys()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn add(&self, o: &Strategy) -> Strategy {
        assert_eq!(*self.iface, *o.iface, "adding strategies on different interfaces");
        let mut out = self.clone();
        for (k, c) in &o.table {
            out.add_entry(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Strategy {
        Strategy::from_entries(self.iface.clone(), self.table.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn filter(&self, mut keep: impl FnMut(&IsoKey) -> bool) -> Strategy {
        Strategy {
            iface: self.iface.clone(),
            table: self.table.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// Keys with a single initial move.
    pub fn pointed_part(&self) -> Strategy {
        self.filter(IsoKey::is_pointed)
    }

    pub fn left_position(&self, k: &IsoKey) -> PosKey {
        PosKey::of(&k.representative().project(0, self.iface.nl()))
    }

    pub fn right_position(&self, k: &IsoKey) -> PosKey {
        PosKey::of(&k.representative().project(self.iface.nl(), self.iface.arena.len()))
    }

    pub fn left_positions(&self) -> BTreeSet<PosKey> {
        self.keys().map(|k| self.left_position(k)).collect()
    }

    pub fn right_positions(&self) -> BTreeSet<PosKey> {
        self.keys().map(|k| self.right_position(k)).collect()
    }

    /// Reinterpret on an interface with the same node layout.
    pub fn retype(&self, iface: Arc<Interface>) -> Strategy {
        assert!(self.iface.same_layout(&iface), "retyping across different layouts: {} vs {}", self.iface, iface);
        Strategy { iface, table: self.table.clone() }
    }

    /// `τ ⊙ σ`, summing over mediating symmetries.
    pub fn compose(tau: &Strategy, sigma: &Strategy) -> Strategy {
        let (a, b) = (&sigma.iface, &tau.iface);
        assert_eq!(a.right, b.left, "composing across mismatched interfaces {a} and {b}");
        let iface = Interface::new(a.left.clone(), b.right.clone());
        let na = a.nl();
        let nb = a.nr();
        let mut by_pos: BTreeMap<PosKey, Vec<(Augmentation, &Coeff)>> = BTreeMap::new();
        for (k, c) in &tau.table {
            let p = k.representative();
            by_pos.entry(PosKey::of(&p.project(0, nb))).or_default().push((p, c));
        }
        let sigma_entries: Vec<(Augmentation, &Coeff)> = sigma.table.iter().map(|(k, c)| (k.representative(), c)).collect();
        let partial: Vec<Vec<(IsoKey, Coeff)>> = sigma_entries
            .par_iter()
            .map(|(q, cq)| {
                let mut acc = Vec::new();
                let xq = q.project(na, na + nb);
                let Some(ps) = by_pos.get(&PosKey::of(&xq)) else {
                    return acc;
                };
                for (p, cp) in ps {
                    let g = Gluing { q, q_arena: &a.arena, p, p_arena: &b.arena, na, nb };
                    let coeff = *cq * *cp;
                    for phi in enumerate_symmetries(&xq, &g.p_position()) {
                        let r = compose_aug(&g, &phi).expect("deadlock in composition");
                        acc.push((IsoKey::of(&r), coeff.clone()));
                    }
                }
                acc
            })
            .collect();
        Strategy::from_entries(iface, partial.into_iter().flatten())
    }

    /// `σ1 ⊗ σ2`.
    pub fn tensor(s1: &Strategy, s2: &Strategy) -> Strategy {
        let (i1, i2) = (&s1.iface, &s2.iface);
        let mut left = i1.left.clone();
        left.extend(i2.left.iter().cloned());
        let mut right = i1.right.clone();
        right.extend(i2.right.iter().cloned());
        let iface = Interface::new(left, right);
        let mut out = Strategy::zero(iface);
        let reps2: Vec<(Augmentation, &Coeff)> = s2.table.iter().map(|(k, c)| (k.representative(), c)).collect();
        for (k1, c1) in &s1.table {
            let q1 = k1.representative();
            for (q2, c2) in &reps2 {
                let q = tensor_aug(&q1, i1.nl(), i1.nr(), q2, i2.nl());
                out.add_entry(IsoKey::of(&q), c1 * *c2);
            }
        }
        out
    }

    /// `Λ`: the last `k` left types move to the right.
    pub fn curry(&self, k: usize) -> Strategy {
        let i = &self.iface;
        let split = i.left.len() - k;
        let (gamma, a) = i.left.split_at(split);
        let right: Vec<SimpleType> = i.right.iter().map(|b| curried_type(a, b)).collect();
        let iface = Interface::new(gamma.to_vec(), right);
        Strategy::from_entries(
            iface,
            self.table.iter().map(|(key, c)| (IsoKey::of(&curry_aug(&key.representative(), gamma, a, &i.right)), c.clone())),
        )
    }

    /// `Λ⁻¹`: the first `k` domains of every right type move to the left.
    pub fn uncurry(&self, k: usize) -> Strategy {
        let i = &self.iface;
        assert!(!i.right.is_empty(), "uncurrying with an empty codomain");
        let (a, _) = i.right[0].split_domains(k).expect("not enough domains to uncurry");
        let bs: Vec<SimpleType> = i.right.iter().map(|t| t.split_domains(k).expect("not enough domains").1).collect();
        let mut left = i.left.clone();
        left.extend(a.iter().cloned());
        let iface = Interface::new(left, bs.clone());
        Strategy::from_entries(
            iface,
            self.table.iter().map(|(key, c)| (IsoKey::of(&uncurry_aug(&key.representative(), &i.left, &a, &bs)), c.clone())),
        )
    }
}

pub fn curried_type(a: &[SimpleType], b: &SimpleType) -> SimpleType {
    a.iter().rev().fold(b.clone(), |acc, t| SimpleType::arrow(t.clone(), acc))
}

/// `q1 ⊗ q2` on `(A1 ⊗ A2) ⊢ (B1 ⊗ B2)`.
pub fn tensor_aug(q1: &Augmentation, a1: usize, b1: usize, q2: &Augmentation, a2: usize) -> Augmentation {
    let l = q1.map_display(|d| if d < a1 { d } else { d + a2 });
    let r = q2.map_display(|d| if d < a2 { a1 + d } else { a1 + b1 + d });
    Augmentation::disjoint_union(&l, &r)
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "strategy on {} ({} entries)", self.iface, self.table.len())?;
        for (k, c) in &self.table {
            writeln!(f, "  {c} * {k}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::Symmetry;

    fn o() -> SimpleType {
        SimpleType::Base
    }

    /// The two augmentations of the interaction example: `q` on `o ⊗ o ⊢ o`
    /// and `p` on `o ⊢ (o → o → o) → o`.
    fn example() -> (Arc<Interface>, Augmentation, Arc<Interface>, Augmentation) {
        let iq = Interface::new(vec![o(), o()], vec![o()]);
        let q = Augmentation {
            display: vec![2, 0, 2, 1],
            static_parent: vec![None, None, None, None],
            dyn_parent: vec![None, Some(0), None, Some(2)],
        };
        let ooo = SimpleType::from_domains(vec![o(), o()]);
        let ip = Interface::new(vec![o()], vec![SimpleType::arrow(ooo, o())]);
        let p = Augmentation {
            display: vec![4, 3, 1, 2, 0, 0],
            static_parent: vec![None, Some(0), Some(1), Some(1), None, None],
            dyn_parent: vec![None, Some(0), Some(1), Some(1), Some(2), Some(3)],
        };
        (iq, q, ip, p)
    }

    #[test]
    fn example_inputs_are_valid() {
        let (iq, q, ip, p) = example();
        q.validate(&iq.arena).unwrap();
        p.validate(&ip.arena).unwrap();
    }

    #[test]
    fn crossed_links_differ() {
        let (iq, q, ip, p) = example();
        let g = Gluing { q: &q, q_arena: &iq.arena, p: &p, p_arena: &ip.arena, na: 2, nb: 1 };
        let phis = enumerate_symmetries(&g.q_position(), &g.p_position());
        assert_eq!(phis.len(), 2);
        let iface = Interface::new(vec![o(), o()], ip.right.clone());
        let mut keys = BTreeSet::new();
        for phi in &phis {
            let it = interact(&g, phi).unwrap();
            assert_eq!(it.len(), 10);
            assert!(it.unclassified_edges(&g).is_empty());
            let r = compose_aug(&g, phi).unwrap();
            r.validate(&iface.arena).unwrap();
            assert_eq!(r.len(), 6);
            keys.insert(IsoKey::of(&r));
        }
        assert_eq!(keys.len(), 2);
        let s = Strategy::compose(&Strategy::single(ip, &p, Coeff::one()), &Strategy::single(iq, &q, Coeff::one()));
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|(_, c)| c.is_one()));
        let _ = Symmetry { map: vec![] };
    }

    #[test]
    fn composing_with_zero() {
        let (iq, q, ip, _) = example();
        let s = Strategy::compose(&Strategy::zero(ip), &Strategy::single(iq, &q, Coeff::one()));
        assert!(s.is_zero());
    }

    #[test]
    fn curry_round_trip() {
        let (iq, q, _, _) = example();
        let s = Strategy::single(iq, &q, Coeff::ratio(1, 3));
        let c = s.curry(1);
        assert_eq!(c.interface().right, vec![SimpleType::arrow(o(), o())]);
        assert_eq!(c.uncurry(1), s);
    }
}
