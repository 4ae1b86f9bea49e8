//! Strategy expressions mixing finite strategies and kernels, evaluated
//! under a demand on the positions reached on either side.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::causal::{enumerate_positions, Configuration, IsoKey, PosKey};

use super::{curried_type, Coeff, Interface, Kernel, Side, Strategy};

#[derive(Clone, Debug)]
pub enum Expr {
    Fin(Strategy),
    Ker(Kernel),
    /// `outer ∘ inner`.
    Comp(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Curry(usize, Box<Expr>),
    Uncurry(usize, Box<Expr>),
    /// Same strategy on a regrouped interface.
    Retype(Arc<Interface>, Box<Expr>),
}

/// Sets of admissible positions on the left and right of an interface;
/// `None` leaves a side unconstrained.
#[derive(Clone, Debug, Default)]
pub struct Demand {
    pub left: Option<BTreeSet<PosKey>>,
    pub right: Option<BTreeSet<PosKey>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowTooSmall {
    #[error("expression has infinite support under the given demand")]
    Unbounded,
    #[error("interfaces differ: {0} vs {1}")]
    InterfaceMismatch(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawMismatch {
    pub key: IsoKey,
    pub lhs: Coeff,
    pub rhs: Coeff,
}

impl fmt::Display for LawMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: lhs {} vs rhs {}", self.key, self.lhs, self.rhs)
    }
}

impl Expr {
    pub fn fin(s: Strategy) -> Expr {
        Expr::Fin(s)
    }

    pub fn ker(k: Kernel) -> Expr {
        Expr::Ker(k)
    }

    pub fn comp(outer: Expr, inner: Expr) -> Expr {
        Expr::Comp(Box::new(outer), Box::new(inner))
    }

    /// `e1 ∘ e2 ∘ … ∘ en`.
    pub fn chain(parts: Vec<Expr>) -> Expr {
        let mut it = parts.into_iter().rev();
        let first = it.next().expect("empty composite");
        it.fold(first, |acc, e| Expr::comp(e, acc))
    }

    pub fn tensor(a: Expr, b: Expr) -> Expr {
        Expr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn sum(a: Expr, b: Expr) -> Expr {
        Expr::Sum(Box::new(a), Box::new(b))
    }

    pub fn curry(k: usize, e: Expr) -> Expr {
        Expr::Curry(k, Box::new(e))
    }

    pub fn uncurry(k: usize, e: Expr) -> Expr {
        Expr::Uncurry(k, Box::new(e))
    }

    pub fn retype(iface: Arc<Interface>, e: Expr) -> Expr {
        Expr::Retype(iface, Box::new(e))
    }

    pub fn interface(&self) -> Arc<Interface> {
        match self {
            Expr::Fin(s) => s.interface().clone(),
            Expr::Ker(k) => k.iface.clone(),
            Expr::Comp(o, i) => Interface::new(i.interface().left.clone(), o.interface().right.clone()),
            Expr::Tensor(a, b) => {
                let (a, b) = (a.interface(), b.interface());
                let mut left = a.left.clone();
                left.extend(b.left.iter().cloned());
                let mut right = a.right.clone();
                right.extend(b.right.iter().cloned());
                Interface::new(left, right)
            }
            Expr::Sum(a, _) => a.interface(),
            Expr::Curry(k, e) => {
                let i = e.interface();
                let (g, a) = i.left.split_at(i.left.len() - k);
                Interface::new(g.to_vec(), i.right.iter().map(|b| curried_type(a, b)).collect())
            }
            Expr::Uncurry(k, e) => {
                let i = e.interface();
                let (a, _) = i.right[0].split_domains(*k).expect("not enough domains");
                let mut left = i.left.clone();
                left.extend(a);
                Interface::new(left, i.right.iter().map(|t| t.split_domains(*k).unwrap().1).collect())
            }
            Expr::Retype(i, _) => i.clone(),
        }
    }
}

/// Whether evaluation terminates with finite support when the left (resp.
/// right) positions are constrained.
pub fn bounded(e: &Expr, l: bool, r: bool) -> bool {
    match e {
        Expr::Fin(_) => true,
        Expr::Ker(k) => k.is_finite() || l || r,
        Expr::Comp(o, i) => (bounded(i, l, false) && bounded(o, true, r)) || (bounded(o, false, r) && bounded(i, l, true)),
        Expr::Tensor(a, b) | Expr::Sum(a, b) => bounded(a, l, r) && bounded(b, l, r),
        Expr::Curry(_, e) => bounded(e, false, r),
        Expr::Uncurry(_, e) => bounded(e, l, false),
        Expr::Retype(_, e) => bounded(e, l, r),
    }
}

fn keep(s: &Strategy, d: &Demand) -> Strategy {
    if d.left.is_none() && d.right.is_none() {
        return s.clone();
    }
    s.filter(|k| {
        d.left.as_ref().is_none_or(|l| l.contains(&s.left_position(k)))
            && d.right.as_ref().is_none_or(|r| r.contains(&s.right_position(k)))
    })
}

fn split_positions(set: &BTreeSet<PosKey>, cut: usize, total: usize) -> (BTreeSet<PosKey>, BTreeSet<PosKey>) {
    let mut a = BTreeSet::new();
    let mut b = BTreeSet::new();
    for k in set {
        let x = k.representative();
        a.insert(PosKey::of(&x.project(0, cut)));
        b.insert(PosKey::of(&x.project(cut, total)));
    }
    (a, b)
}

/// The part of a position on `(A⃗ ⇒ B_j)_j` lying in the `B_j`, re-laid out
/// on `⊗B_j`.
fn codomain_part(x: &Configuration, na: usize, b_sizes: &[usize]) -> Configuration {
    let mut blocks = Vec::with_capacity(b_sizes.len() + 1);
    let mut acc = 0;
    for &s in b_sizes {
        blocks.push(acc);
        acc += na + s;
    }
    blocks.push(acc);
    let keep: Vec<bool> = x
        .display
        .iter()
        .map(|&d| {
            let j = blocks.partition_point(|&o| o <= d) - 1;
            d - blocks[j] >= na
        })
        .collect();
    let mut c = x.restrict(&keep);
    for d in c.display.iter_mut() {
        let j = blocks.partition_point(|&o| o <= *d) - 1;
        let before: usize = b_sizes[..j].iter().sum();
        *d = before + (*d - blocks[j] - na);
    }
    c
}

pub fn evaluate(e: &Expr, d: &Demand) -> Result<Strategy, WindowTooSmall> {
    if !bounded(e, d.left.is_some(), d.right.is_some()) {
        return Err(WindowTooSmall::Unbounded);
    }
    Ok(match e {
        Expr::Fin(s) => keep(s, d),
        Expr::Ker(k) => {
            let (fine, coarse) = match k.fine {
                Side::Left => (&d.left, &d.right),
                Side::Right => (&d.right, &d.left),
            };
            let s = if let Some(ws) = fine {
                k.at_fine(ws.iter().map(PosKey::representative))
            } else if let Some(xs) = coarse {
                k.at_coarse(xs)
            } else {
                k.at_fine([Configuration::empty()])
            };
            keep(&s, d)
        }
        Expr::Comp(o, i) => {
            let l = d.left.is_some();
            let r = d.right.is_some();
            let (so, si) = if bounded(i, l, false) && bounded(o, true, r) {
                let si = evaluate(i, &Demand { left: d.left.clone(), right: None })?;
                let so = evaluate(o, &Demand { left: Some(si.right_positions()), right: d.right.clone() })?;
                (so, si)
            } else {
                let so = evaluate(o, &Demand { left: None, right: d.right.clone() })?;
                let si = evaluate(i, &Demand { left: d.left.clone(), right: Some(so.left_positions()) })?;
                (so, si)
            };
            Strategy::compose(&so, &si)
        }
        Expr::Tensor(a, b) => {
            let (ia, ib) = (a.interface(), b.interface());
            let (la, lb) = match &d.left {
                Some(l) => {
                    let (x, y) = split_positions(l, ia.nl(), ia.nl() + ib.nl());
                    (Some(x), Some(y))
                }
                None => (None, None),
            };
            let (ra, rb) = match &d.right {
                Some(r) => {
                    let (x, y) = split_positions(r, ia.nr(), ia.nr() + ib.nr());
                    (Some(x), Some(y))
                }
                None => (None, None),
            };
            let sa = evaluate(a, &Demand { left: la, right: ra })?;
            let sb = evaluate(b, &Demand { left: lb, right: rb })?;
            keep(&Strategy::tensor(&sa, &sb), d)
        }
        Expr::Sum(a, b) => evaluate(a, d)?.add(&evaluate(b, d)?),
        Expr::Curry(k, inner) => {
            let ii = inner.interface();
            let right = d.right.as_ref().map(|r| {
                let split = ii.left.len() - k;
                let na: usize = ii.left[split..].iter().map(|t| t.atoms()).sum();
                let sizes: Vec<usize> = ii.right.iter().map(|t| t.atoms()).collect();
                r.iter().map(|x| PosKey::of(&codomain_part(&x.representative(), na, &sizes))).collect()
            });
            let s = evaluate(inner, &Demand { left: None, right })?;
            keep(&s.curry(*k), d)
        }
        Expr::Uncurry(k, inner) => {
            let ii = inner.interface();
            let left = d
                .left
                .as_ref()
                .map(|l| l.iter().map(|x| PosKey::of(&x.representative().project(0, ii.nl()))).collect());
            let s = evaluate(inner, &Demand { left, right: None })?;
            keep(&s.uncurry(*k), d)
        }
        Expr::Retype(iface, inner) => evaluate(inner, d)?.retype(iface.clone()),
    })
}

/// Compare two expressions on every entry whose left position has at most
/// `window` events. Returns the first differing entry, if any.
pub fn windowed_equal(lhs: &Expr, rhs: &Expr, window: usize) -> Result<Option<LawMismatch>, WindowTooSmall> {
    let (il, ir) = (lhs.interface(), rhs.interface());
    if *il != *ir {
        return Err(WindowTooSmall::InterfaceMismatch(il.to_string(), ir.to_string()));
    }
    let positions: BTreeSet<PosKey> = enumerate_positions(&il.left_arena, window).into_keys().collect();
    let d = Demand { left: Some(positions), right: None };
    let a = evaluate(lhs, &d)?;
    let b = evaluate(rhs, &d)?;
    let mut keys: BTreeMap<&IsoKey, ()> = BTreeMap::new();
    for k in a.keys().chain(b.keys()) {
        keys.insert(k, ());
    }
    for k in keys.into_keys() {
        let (x, y) = (a.get(k), b.get(k));
        if x != y {
            return Ok(Some(LawMismatch { key: k.clone(), lhs: x, rhs: y }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::SimpleType;

    fn o() -> SimpleType {
        SimpleType::Base
    }

    #[test]
    fn identity_is_idempotent() {
        let ts = [SimpleType::arrow(o(), o())];
        let id = || Expr::ker(Kernel::id(&ts));
        assert_eq!(windowed_equal(&Expr::comp(id(), id()), &id(), 4).unwrap(), None);
    }

    #[test]
    fn bare_kernel_is_unbounded() {
        let e = Expr::ker(Kernel::id(&[o()]));
        assert_eq!(evaluate(&e, &Demand::default()).unwrap_err(), WindowTooSmall::Unbounded);
    }

    #[test]
    fn eps_after_pointed_identity_vanishes() {
        let ts = [o()];
        let lhs = Expr::comp(Expr::ker(Kernel::eps(&ts)), Expr::ker(Kernel::pointed_id(&ts)));
        let s = evaluate(&lhs, &Demand { left: Some(enumerate_positions(&lhs.interface().left_arena, 5).into_keys().collect()), right: None }).unwrap();
        assert!(s.is_zero());
    }
}
