//! Seeded random interactions between augmentations on small arenas.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::causal::{enumerate_augmentations, enumerate_symmetries, Augmentation, PosKey};
use crate::syntax::SimpleType;

use super::{interact, Gluing, Interface};

#[derive(Clone, Debug, Default, Serialize)]
pub struct FuzzReport {
    pub interactions: usize,
    pub deadlocks: usize,
    pub unclassified_edges: usize,
    pub max_arena: usize,
}

struct Side {
    iface: std::sync::Arc<Interface>,
    augs: Vec<Augmentation>,
    by_left: BTreeMap<PosKey, Vec<usize>>,
}

fn side(left: Vec<SimpleType>, right: Vec<SimpleType>, max_events: usize) -> Side {
    let iface = Interface::new(left, right);
    let augs: Vec<Augmentation> = enumerate_augmentations(&iface.arena, max_events, false).into_values().collect();
    let mut by_left: BTreeMap<PosKey, Vec<usize>> = BTreeMap::new();
    for (i, q) in augs.iter().enumerate() {
        by_left.entry(PosKey::of(&q.project(0, iface.nl()))).or_default().push(i);
    }
    Side { iface, augs, by_left }
}

fn small_lists() -> Vec<Vec<SimpleType>> {
    let o = SimpleType::Base;
    let oo = SimpleType::arrow(o.clone(), o.clone());
    vec![
        vec![],
        vec![o.clone()],
        vec![oo.clone()],
        vec![SimpleType::arrow(oo.clone(), o.clone())],
        vec![SimpleType::arrow(o.clone(), oo.clone())],
        vec![o.clone(), o.clone()],
        vec![o.clone(), oo.clone()],
        vec![SimpleType::arrow(o.clone(), SimpleType::arrow(o.clone(), oo.clone()))],
        vec![SimpleType::arrow(oo.clone(), oo.clone())],
        vec![oo.clone(), oo.clone()],
        vec![SimpleType::arrow(SimpleType::arrow(oo.clone(), o.clone()), o.clone()), o.clone()],
        vec![SimpleType::arrow(o.clone(), oo.clone()), oo.clone()],
    ]
}

fn atoms(ts: &[SimpleType]) -> usize {
    ts.iter().map(SimpleType::atoms).sum()
}

/// Glue `trials` random pairs `q` on `A ⊢ B`, `p` on `B ⊢ C` along a random
/// mediating symmetry, counting deadlocks and edges outside the three
/// expected shapes. Hom arenas have at most `max_nodes` nodes.
pub fn fuzz_interactions(trials: usize, seed: u64, max_nodes: usize, max_events: usize) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lists = small_lists();
    let mut triples = Vec::new();
    for a in &lists {
        for b in &lists {
            for c in &lists {
                if !b.is_empty() && atoms(a) + atoms(b) <= max_nodes && atoms(b) + atoms(c) <= max_nodes {
                    triples.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
    }
    let mut cache: BTreeMap<(Vec<SimpleType>, Vec<SimpleType>), Side> = BTreeMap::new();
    let mut report = FuzzReport::default();
    let mut attempts = 0;
    while report.interactions < trials {
        attempts += 1;
        assert!(attempts < trials * 100, "fuzzer cannot find matching pairs");
        let (a, b, c) = triples.choose(&mut rng).unwrap().clone();
        for key in [(a.clone(), b.clone()), (b.clone(), c.clone())] {
            cache.entry(key.clone()).or_insert_with(|| side(key.0, key.1, max_events));
        }
        let qs = &cache[&(a.clone(), b.clone())];
        let ps = &cache[&(b.clone(), c.clone())];
        let q = &qs.augs[rng.gen_range(0..qs.augs.len())];
        let nq_left = qs.iface.nl();
        let xq = q.project(nq_left, qs.iface.arena.len());
        let Some(cands) = ps.by_left.get(&PosKey::of(&xq)) else {
            continue;
        };
        let p = &ps.augs[*cands.choose(&mut rng).unwrap()];
        let g = Gluing { q, q_arena: &qs.iface.arena, p, p_arena: &ps.iface.arena, na: nq_left, nb: qs.iface.nr() };
        let syms = enumerate_symmetries(&g.q_position(), &g.p_position());
        let phi = syms.choose(&mut rng).expect("equal positions are symmetric");
        report.interactions += 1;
        report.max_arena = report.max_arena.max(qs.iface.arena.len()).max(ps.iface.arena.len());
        match interact(&g, phi) {
            Ok(it) => report.unclassified_edges += it.unclassified_edges(&g).len(),
            Err(_) => report.deadlocks += 1,
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fuzz_run() {
        let r = fuzz_interactions(200, 1, 10, 4);
        assert_eq!(r.interactions, 200);
        assert_eq!(r.deadlocks, 0);
        assert_eq!(r.unclassified_edges, 0);
    }
}
