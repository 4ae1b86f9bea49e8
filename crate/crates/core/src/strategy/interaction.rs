//! Interaction of two augmentations along a symmetry, and hiding.

use fixedbitset::FixedBitSet;
use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::arena::{Arena, NodeId, Polarity};
use crate::causal::{Augmentation, Configuration, EventId, Symmetry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("deadlock: causal cycle through interaction event {event}")]
pub struct DeadlockDetected {
    pub event: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Left,
    Right,
    Mediator,
}

/// `q` on `A ⊢ B` and `p` on `B ⊢ C`, with `|A| = na` and `|B| = nb`.
#[derive(Clone, Copy, Debug)]
pub struct Gluing<'a> {
    pub q: &'a Augmentation,
    pub q_arena: &'a Arena,
    pub p: &'a Augmentation,
    pub p_arena: &'a Arena,
    pub na: usize,
    pub nb: usize,
}

impl<'a> Gluing<'a> {
    fn q_in_b(&self, d: NodeId) -> bool {
        d >= self.na
    }

    fn p_in_b(&self, d: NodeId) -> bool {
        d < self.nb
    }

    /// Events of `q` displayed to `B`, in order.
    pub fn q_middle(&self) -> Vec<EventId> {
        (0..self.q.len()).filter(|&e| self.q_in_b(self.q.display[e])).collect()
    }

    pub fn p_middle(&self) -> Vec<EventId> {
        (0..self.p.len()).filter(|&e| self.p_in_b(self.p.display[e])).collect()
    }

    /// `x_B^q` on `B`.
    pub fn q_position(&self) -> Configuration {
        self.q.project(self.na, self.q_arena.len())
    }

    /// `x_B^p` on `B`.
    pub fn p_position(&self) -> Configuration {
        self.p.project(0, self.nb)
    }
}

/// The interaction `p ⊛_φ q`: events of `q` are `0..nq`, those of `p`
/// follow.
#[derive(Clone, Debug)]
pub struct Interaction {
    pub nq: usize,
    pub np: usize,
    pub edges: Vec<(usize, usize, Origin)>,
    /// Strict causal predecessors of every event.
    pub below: Vec<FixedBitSet>,
    pub visible: Vec<bool>,
    /// Image of each middle event under the mediating symmetry, both ways.
    pub partner: Vec<Option<usize>>,
}

pub fn interact(g: &Gluing, phi: &Symmetry) -> Result<Interaction, DeadlockDetected> {
    let nq = g.q.len();
    let np = g.p.len();
    let n = nq + np;
    let qm = g.q_middle();
    let pm = g.p_middle();
    assert_eq!(qm.len(), phi.map.len(), "symmetry does not match the middle events");
    let mut edges = Vec::new();
    for e in 0..nq {
        if let Some(d) = g.q.dyn_parent[e] {
            edges.push((d, e, Origin::Left));
        }
    }
    for e in 0..np {
        if let Some(d) = g.p.dyn_parent[e] {
            edges.push((nq + d, nq + e, Origin::Right));
        }
    }
    let mut partner = vec![None; n];
    for (i, &m) in qm.iter().enumerate() {
        let pe = pm[phi.map[i]];
        partner[m] = Some(nq + pe);
        partner[nq + pe] = Some(m);
        if g.q_arena.polarity(g.q.display[m]) == Polarity::Pos {
            edges.push((m, nq + pe, Origin::Mediator));
        } else {
            edges.push((nq + pe, m, Origin::Mediator));
        }
    }
    let mut graph = DiGraph::<(), ()>::with_capacity(n, edges.len());
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for &(a, b, _) in &edges {
        graph.add_edge(nodes[a], nodes[b], ());
    }
    let order = toposort(&graph, None).map_err(|c| DeadlockDetected { event: c.node_id().index() })?;
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b, _) in &edges {
        preds[b].push(a);
    }
    let mut below = vec![FixedBitSet::with_capacity(n); n];
    for v in order {
        let v = v.index();
        let mut acc = FixedBitSet::with_capacity(n);
        for &u in &preds[v] {
            acc.insert(u);
            acc.union_with(&below[u]);
        }
        below[v] = acc;
    }
    let mut visible = vec![false; n];
    for e in 0..nq {
        visible[e] = !g.q_in_b(g.q.display[e]);
    }
    for e in 0..np {
        visible[nq + e] = !g.p_in_b(g.p.display[e]);
    }
    Ok(Interaction { nq, np, edges, below, visible, partner })
}

impl Interaction {
    pub fn len(&self) -> usize {
        self.nq + self.np
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Immediate causal links of the transitive closure.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for n in 0..self.len() {
            for m in self.below[n].ones() {
                if !self.below[n].ones().any(|k| k != m && self.below[k].contains(m)) {
                    out.push((m, n));
                }
            }
        }
        out
    }

    /// Immediate links that fit none of the clauses describing forward and
    /// backward immediate causality in an interaction.
    pub fn unclassified_edges(&self, g: &Gluing) -> Vec<(usize, usize)> {
        let nq = self.nq;
        let side = |e: usize| if e < nq { (1, e) } else { (2, e - nq) };
        let pol = |e: usize| match side(e) {
            (1, m) => g.q_arena.polarity(g.q.display[m]),
            (_, m) => g.p_arena.polarity(g.p.display[m]),
        };
        let middle = |e: usize| match side(e) {
            (1, m) => g.q_in_b(g.q.display[m]),
            (_, m) => g.p_in_b(g.p.display[m]),
        };
        let local_edge = |m: usize, n: usize| match (side(m), side(n)) {
            ((1, a), (1, b)) => g.q.dyn_parent[b] == Some(a),
            ((2, a), (2, b)) => g.p.dyn_parent[b] == Some(a),
            _ => false,
        };
        self.covers()
            .into_iter()
            .filter(|&(m, n)| {
                let forward = if pol(m) == Polarity::Pos && middle(m) {
                    self.partner[m] == Some(n)
                } else {
                    local_edge(m, n)
                };
                let backward = if pol(n) == Polarity::Neg && middle(n) {
                    self.partner[n] == Some(m)
                } else {
                    local_edge(m, n)
                };
                !(forward && backward)
            })
            .collect()
    }
}

/// `p ⊙_φ q` on `A ⊢ C`.
pub fn compose_aug(g: &Gluing, phi: &Symmetry) -> Result<Augmentation, DeadlockDetected> {
    let it = interact(g, phi)?;
    Ok(hide(g, &it))
}

pub fn hide(g: &Gluing, it: &Interaction) -> Augmentation {
    let n = it.len();
    let mut index = vec![usize::MAX; n];
    let mut k = 0;
    for e in 0..n {
        if it.visible[e] {
            index[e] = k;
            k += 1;
        }
    }
    let mut out = Augmentation::empty();
    for e in 0..n {
        if !it.visible[e] {
            continue;
        }
        let (display, sp) = if e < it.nq {
            (g.q.display[e], g.q.static_parent[e])
        } else {
            let m = e - it.nq;
            (g.p.display[m] - g.nb + g.na, g.p.static_parent[m].map(|s| s + it.nq))
        };
        let anc: Vec<usize> = it.below[e].ones().filter(|&a| it.visible[a]).collect();
        let dp = anc.iter().copied().max_by_key(|&a| it.below[a].count_ones(..));
        if let Some(d) = dp {
            debug_assert!(anc.iter().all(|&a| a == d || it.below[d].contains(a)), "visible causal history is not a chain");
        }
        out.display.push(display);
        out.static_parent.push(sp.map(|s| index[s]));
        out.dyn_parent.push(dp.map(|d| index[d]));
    }
    out
}
