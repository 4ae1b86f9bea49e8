//! Resource substitution, one-step reduction and normalization.

use num_bigint::BigUint;
use thiserror::Error;

use crate::syntax::{Bag, BagSum, Head, Seq, SeqSum, Sum, Term, TermSum};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("term has no redex")]
    NoRedex,
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(u64),
}

/// All `k^|b|` ways of splitting `b` into `k` blocks, one per assignment of
/// element indices to blocks. Equal elements are not identified.
pub fn enumerate_partitionings(b: &Bag, k: usize) -> Vec<Vec<Bag>> {
    assert!(k >= 1, "need at least one block");
    let n = b.len();
    let total = k.checked_pow(n as u32).expect("too many partitionings");
    let mut out = Vec::with_capacity(total);
    let mut assign = vec![0usize; n];
    for _ in 0..total {
        let mut blocks = vec![Vec::new(); k];
        for (i, &blk) in assign.iter().enumerate() {
            blocks[blk].push(b.elems()[i].clone());
        }
        out.push(blocks.into_iter().map(Bag::new).collect());
        for a in assign.iter_mut() {
            *a += 1;
            if *a < k {
                break;
            }
            *a = 0;
        }
    }
    out
}

#[derive(Clone, Copy)]
enum Target<'a> {
    Free(&'a str),
    /// The variable bound by a binder being eliminated; it has index `depth`.
    Bound,
}

struct Subst<'a> {
    target: Target<'a>,
    elems: &'a [Term],
}

type Mask = u64;

fn submasks(m: Mask) -> impl Iterator<Item = Mask> {
    let mut cur = Some(m);
    std::iter::from_fn(move || {
        let s = cur?;
        cur = if s == 0 { None } else { Some((s - 1) & m) };
        Some(s)
    })
}

impl<'a> Subst<'a> {
    fn is_target(&self, h: &Head, depth: u32) -> bool {
        match (self.target, h) {
            (Target::Free(x), Head::Free(n)) => &**n == x,
            (Target::Bound, Head::Bound(i)) => *i == depth,
            _ => false,
        }
    }

    fn occ_term(&self, t: &Term, depth: u32) -> u32 {
        match t {
            Term::Var(h, args) => self.is_target(h, depth) as u32 + self.occ_seq(args, depth),
            Term::Abs(_, _, body) => self.occ_term(body, depth + 1),
            Term::App(f, b) => self.occ_term(f, depth) + self.occ_bag(b, depth),
        }
    }

    fn occ_bag(&self, b: &Bag, depth: u32) -> u32 {
        b.elems().iter().map(|t| self.occ_term(t, depth)).sum()
    }

    fn occ_seq(&self, s: &Seq, depth: u32) -> u32 {
        s.items().iter().map(|b| self.occ_bag(b, depth)).sum()
    }

    /// Rewrite indices of a subterm with no occurrence of the target.
    fn adjust_term(&self, t: &Term, depth: u32) -> Term {
        match self.target {
            Target::Free(_) => t.clone(),
            Target::Bound => lower(t, depth),
        }
    }

    fn adjust_head(&self, h: &Head, depth: u32) -> Head {
        match (self.target, h) {
            (Target::Bound, Head::Bound(i)) if *i > depth => Head::Bound(i - 1),
            _ => h.clone(),
        }
    }

    fn element(&self, i: usize, depth: u32) -> Term {
        self.elems[i].shift(depth, 0)
    }

    fn term(&self, t: &Term, depth: u32, mask: Mask) -> TermSum {
        let occ = self.occ_term(t, depth);
        if occ != mask.count_ones() {
            return TermSum::zero();
        }
        if occ == 0 {
            return TermSum::single(self.adjust_term(t, depth));
        }
        match t {
            Term::Var(h, args) => {
                if self.is_target(h, depth) {
                    let mut out = TermSum::zero();
                    for i in 0..self.elems.len() {
                        if mask & (1 << i) == 0 {
                            continue;
                        }
                        let head = self.element(i, depth);
                        let rest = self.seq(args, depth, mask & !(1 << i));
                        for (s, c) in rest.iter() {
                            let applied = s
                                .items()
                                .iter()
                                .fold(head.clone(), |acc, b| Term::App(Box::new(acc), b.clone()));
                            out.add_entry(applied, c.clone());
                        }
                    }
                    out
                } else {
                    let head = self.adjust_head(h, depth);
                    self.seq(args, depth, mask).map(|s| Term::Var(head.clone(), s.clone()))
                }
            }
            Term::Abs(hint, ty, body) => self
                .term(body, depth + 1, mask)
                .map(|b| Term::Abs(hint.clone(), ty.clone(), Box::new(b.clone()))),
            Term::App(f, b) => {
                let occ_f = self.occ_term(f, depth);
                let mut out = TermSum::zero();
                for mf in submasks(mask).filter(|m| m.count_ones() == occ_f) {
                    let fs = self.term(f, depth, mf);
                    if fs.is_zero() {
                        continue;
                    }
                    let bs = self.bag(b, depth, mask & !mf);
                    out.add_assign(&fs.product(&bs, |f, b| Term::App(Box::new(f.clone()), b.clone())));
                }
                out
            }
        }
    }

    /// Distribute `mask` over the slots, multiplying the per-slot sums.
    fn distribute<T: Ord + Clone>(
        &self,
        occs: &[u32],
        mask: Mask,
        slot: &dyn Fn(usize, Mask) -> Sum<T>,
    ) -> Sum<Vec<T>> {
        fn go<T: Ord + Clone>(
            i: usize,
            occs: &[u32],
            rest: Mask,
            acc: Sum<Vec<T>>,
            slot: &dyn Fn(usize, Mask) -> Sum<T>,
        ) -> Sum<Vec<T>> {
            if i == occs.len() {
                return if rest == 0 { acc } else { Sum::zero() };
            }
            let mut out = Sum::zero();
            let choices: Vec<Mask> = if i + 1 == occs.len() {
                vec![rest]
            } else {
                submasks(rest).filter(|m| m.count_ones() == occs[i]).collect()
            };
            for m in choices {
                if m.count_ones() != occs[i] {
                    continue;
                }
                let s = slot(i, m);
                if s.is_zero() {
                    continue;
                }
                let next = acc.product(&s, |v, t| {
                    let mut v = v.clone();
                    v.push(t.clone());
                    v
                });
                out.add_assign(&go(i + 1, occs, rest & !m, next, slot));
            }
            out
        }
        go(0, occs, mask, Sum::single(Vec::new()), slot)
    }

    fn bag(&self, b: &Bag, depth: u32, mask: Mask) -> BagSum {
        let occs: Vec<u32> = b.elems().iter().map(|t| self.occ_term(t, depth)).collect();
        if occs.iter().sum::<u32>() != mask.count_ones() {
            return BagSum::zero();
        }
        if b.is_empty() {
            return BagSum::single(Bag::empty());
        }
        self.distribute(&occs, mask, &|i, m| self.term(&b.elems()[i], depth, m))
            .map(|v| Bag::new(v.clone()))
    }

    fn seq(&self, s: &Seq, depth: u32, mask: Mask) -> SeqSum {
        let occs: Vec<u32> = s.items().iter().map(|b| self.occ_bag(b, depth)).collect();
        if occs.iter().sum::<u32>() != mask.count_ones() {
            return SeqSum::zero();
        }
        if s.is_empty() {
            return SeqSum::single(Seq::empty());
        }
        self.distribute(&occs, mask, &|i, m| self.bag(&s.items()[i], depth, m))
            .map(|v| Seq::new(v.clone()))
    }
}

/// Decrement bound indices above `depth`; the term must not mention `depth`.
fn lower(t: &Term, depth: u32) -> Term {
    match t {
        Term::Var(h, args) => {
            let h = match h {
                Head::Bound(i) if *i > depth => Head::Bound(i - 1),
                h => h.clone(),
            };
            Term::Var(h, Seq::new(args.items().iter().map(|b| lower_bag(b, depth)).collect()))
        }
        Term::Abs(hint, ty, body) => Term::Abs(hint.clone(), ty.clone(), Box::new(lower(body, depth + 1))),
        Term::App(f, b) => Term::App(Box::new(lower(f, depth)), lower_bag(b, depth)),
    }
}

fn lower_bag(b: &Bag, depth: u32) -> Bag {
    Bag::new(b.elems().iter().map(|t| lower(t, depth)).collect())
}

fn full_mask(b: &Bag) -> Mask {
    assert!(b.len() < 64, "bag too large");
    (1u64 << b.len()) - 1
}

/// `t{b̄/x}` for a free variable `x`.
pub fn substitute_term(t: &Term, x: &str, b: &Bag) -> TermSum {
    let s = Subst { target: Target::Free(x), elems: b.elems() };
    s.term(t, 0, full_mask(b))
}

pub fn substitute_bag(c: &Bag, x: &str, b: &Bag) -> BagSum {
    let s = Subst { target: Target::Free(x), elems: b.elems() };
    s.bag(c, 0, full_mask(b))
}

pub fn substitute_seq(c: &Seq, x: &str, b: &Bag) -> SeqSum {
    let s = Subst { target: Target::Free(x), elems: b.elems() };
    s.seq(c, 0, full_mask(b))
}

/// Contract `(λ.body) b̄`.
pub fn contract(body: &Term, b: &Bag) -> TermSum {
    let s = Subst { target: Target::Bound, elems: b.elems() };
    s.term(body, 0, full_mask(b))
}

/// Redex selection order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    LeftmostOutermost,
    RightmostInnermost,
}

fn step(t: &Term, order: Order) -> Option<TermSum> {
    match t {
        Term::App(f, b) => {
            let wrap_f = |s: TermSum| s.map(|f2| Term::App(Box::new(f2.clone()), b.clone()));
            let wrap_b = |s: BagSum| s.map(|b2| Term::App(f.clone(), b2.clone()));
            match order {
                Order::LeftmostOutermost => {
                    if let Term::Abs(_, _, body) = f.as_ref() {
                        return Some(contract(body, b));
                    }
                    step(f, order).map(wrap_f).or_else(|| step_bag(b, order).map(wrap_b))
                }
                Order::RightmostInnermost => step_bag(b, order)
                    .map(wrap_b)
                    .or_else(|| step(f, order).map(wrap_f))
                    .or_else(|| match f.as_ref() {
                        Term::Abs(_, _, body) => Some(contract(body, b)),
                        _ => None,
                    }),
            }
        }
        Term::Abs(h, ty, body) => {
            step(body, order).map(|s| s.map(|b| Term::Abs(h.clone(), ty.clone(), Box::new(b.clone()))))
        }
        Term::Var(h, args) => step_seq(args, order).map(|s| s.map(|a| Term::Var(h.clone(), a.clone()))),
    }
}

fn step_bag(b: &Bag, order: Order) -> Option<BagSum> {
    let n = b.len();
    let idx: Vec<usize> = match order {
        Order::LeftmostOutermost => (0..n).collect(),
        Order::RightmostInnermost => (0..n).rev().collect(),
    };
    for i in idx {
        if let Some(s) = step(&b.elems()[i], order) {
            return Some(s.map(|t| {
                let mut v = b.elems().to_vec();
                v[i] = t.clone();
                Bag::new(v)
            }));
        }
    }
    None
}

fn step_seq(s: &Seq, order: Order) -> Option<SeqSum> {
    let n = s.len();
    let idx: Vec<usize> = match order {
        Order::LeftmostOutermost => (0..n).collect(),
        Order::RightmostInnermost => (0..n).rev().collect(),
    };
    for i in idx {
        if let Some(r) = step_bag(&s.items()[i], order) {
            return Some(r.map(|b| {
                let mut v = s.items().to_vec();
                v[i] = b.clone();
                Seq::new(v)
            }));
        }
    }
    None
}

/// Contract the leftmost-outermost redex.
pub fn reduce_step(t: &Term) -> Result<TermSum, RewriteError> {
    reduce_step_with(t, Order::LeftmostOutermost)
}

pub fn reduce_step_with(t: &Term, order: Order) -> Result<TermSum, RewriteError> {
    step(t, order).ok_or(RewriteError::NoRedex)
}

pub fn normalize(s: &TermSum, fuel: u64) -> Result<TermSum, RewriteError> {
    normalize_with(s, fuel, Order::LeftmostOutermost)
}

pub fn normalize_with(s: &TermSum, fuel: u64, order: Order) -> Result<TermSum, RewriteError> {
    let mut pending = s.clone();
    let mut done = TermSum::zero();
    let mut steps = 0u64;
    while let Some((t, c)) = pending.pop_first() {
        match step(&t, order) {
            None => done.add_entry(t, c),
            Some(r) => {
                steps += 1;
                if steps > fuel {
                    return Err(RewriteError::FuelExhausted(fuel));
                }
                pending.add_assign(&r.scale(&c));
            }
        }
    }
    Ok(done)
}

pub fn normalize_term(t: &Term) -> Result<TermSum, RewriteError> {
    normalize(&TermSum::single(t.clone()), DEFAULT_FUEL)
}

/// Coefficient helper for tests and reports.
pub fn max_coefficient(s: &TermSum) -> BigUint {
    s.iter().map(|(_, c)| c.clone()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, print_sum};

    fn bag_of(src: &str) -> Bag {
        match parse_term(&format!("_h {src}")).unwrap() {
            Term::Var(_, s) => s.items()[0].clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitionings(&Bag::empty(), 2), vec![vec![Bag::empty(), Bag::empty()]]);
        let yz = bag_of("[y, z]");
        let p = enumerate_partitionings(&yz, 2);
        assert_eq!(p.len(), 4);
        let yy = bag_of("[y, y]");
        let p = enumerate_partitionings(&yy, 2);
        let split = vec![bag_of("[y]"), bag_of("[y]")];
        assert_eq!(p.iter().filter(|v| **v == split).count(), 2);
    }

    #[test]
    fn variable_cases() {
        let y = Term::var("y");
        assert_eq!(substitute_term(&y, "x", &Bag::empty()), TermSum::single(y.clone()));
        assert!(substitute_term(&Term::var("x"), "x", &Bag::empty()).is_zero());
        assert_eq!(substitute_term(&Term::var("x"), "x", &bag_of("[y]")), TermSum::single(y));
        assert!(substitute_term(&Term::var("x"), "x", &bag_of("[y, z]")).is_zero());
    }

    #[test]
    fn contraction_examples() {
        let t = parse_term(r"(\x:o. x) [y]").unwrap();
        assert_eq!(reduce_step(&t).unwrap(), TermSum::single(Term::var("y")));
        let t = parse_term(r"(\x:o. x) []").unwrap();
        assert!(normalize_term(&t).unwrap().is_zero());
        assert_eq!(reduce_step(&parse_term(r"\x:o. x").unwrap()), Err(RewriteError::NoRedex));
    }

    #[test]
    fn three_permutations() {
        let t = parse_term(r"(\x:o. f [x] [x] [x]) [a, b, c]").unwrap();
        let n = normalize_term(&t).unwrap();
        assert_eq!(n.len(), 6);
        assert!(n.iter().all(|(_, c)| *c == BigUint::from(1u32)));
    }

    #[test]
    fn duplicated_resources() {
        let t = parse_term(r"(\x:o. f [x] [x]) [y, y]").unwrap();
        let n = normalize_term(&t).unwrap();
        assert_eq!(print_sum(&n), "2 * f [y] [y]");
    }

    #[test]
    fn binder_under_substitution_is_not_captured() {
        // the bound y inside must not capture the free y being substituted
        let t = parse_term(r"(\x:o. g [\y:o. h [x] [y]]) [y]").unwrap();
        let n = normalize_term(&t).unwrap();
        let expected = parse_term(r"g [\z:o. h [y] [z]]").unwrap();
        assert_eq!(n, TermSum::single(expected));
    }
}
