//! Normal terms as pointed isogmentations and back.
//!
//! An expression typed in `Γ` at `A` is encoded as an augmentation on
//! `⟦Γ⟧ ⊢ ⟦A⟧`. Abstraction is currying, which only moves static roots under
//! the initial move since the node layouts coincide; a variable `x_i⟨s⟩`
//! prefixes the encoding of `s` with the pair `⊖ ⋖ ⊕` and re-displays its
//! right-hand part under the `i`-th context component.

use thiserror::Error;

use crate::arena::{component_offsets, NodeId};
use crate::causal::{canonicalize, multisets, Augmentation, EventId, Isogmentation};
use crate::syntax::{Bag, Context, Hint, Scope, Seq, SimpleType, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("expression is not normal")]
    NotNormal,
    #[error("expression is ill-typed: {0}")]
    IllTyped(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot decode: {0}")]
pub struct DecodeError(pub String);

fn derr<T>(msg: impl Into<String>) -> Result<T, DecodeError> {
    Err(DecodeError(msg.into()))
}

fn atoms(ts: &[SimpleType]) -> usize {
    ts.iter().map(SimpleType::atoms).sum()
}

/// The dynamic root above every event.
pub fn dyn_root_of(q: &Augmentation) -> Vec<EventId> {
    (0..q.len())
        .map(|e| {
            let mut cur = e;
            while let Some(p) = q.dyn_parent[cur] {
                cur = p;
            }
            cur
        })
        .collect()
}

fn component_of(offsets: &[usize], local: usize) -> usize {
    offsets.partition_point(|&o| o <= local) - 1
}

/// `Λ`: from `Γ ⊗ A⃗ ⊢ B⃗` to `Γ ⊢ (A⃗ ⇒ B_j)_j`.
pub fn curry_aug(q: &Augmentation, gamma: &[SimpleType], a: &[SimpleType], b: &[SimpleType]) -> Augmentation {
    let g = atoms(gamma);
    let na = atoms(a);
    let bo = component_offsets(b);
    let a_roots: Vec<usize> = component_offsets(a).iter().skip(1).map(|o| o - 1).collect();
    let roots = dyn_root_of(q);
    let target = |j: usize| g + j * na + bo[j];
    let mut out = q.clone();
    for e in 0..q.len() {
        let d = q.display[e];
        if d < g {
            continue;
        }
        if d < g + na {
            let rd = q.display[roots[e]];
            let j = component_of(&bo, rd - g - na);
            out.display[e] = target(j) + (d - g);
            if a_roots.contains(&(d - g)) {
                out.static_parent[e] = Some(roots[e]);
            }
        } else {
            let local = d - g - na;
            let j = component_of(&bo, local);
            out.display[e] = target(j) + na + (local - bo[j]);
        }
    }
    out
}

/// Inverse of [`curry_aug`].
pub fn uncurry_aug(q: &Augmentation, gamma: &[SimpleType], a: &[SimpleType], b: &[SimpleType]) -> Augmentation {
    let g = atoms(gamma);
    let na = atoms(a);
    let bo = component_offsets(b);
    let a_roots: Vec<usize> = component_offsets(a).iter().skip(1).map(|o| o - 1).collect();
    let blocks: Vec<usize> = (0..=b.len()).map(|j| j * na + bo[j]).collect();
    let mut out = q.clone();
    for e in 0..q.len() {
        let d = q.display[e];
        if d < g {
            continue;
        }
        let local = d - g;
        let j = component_of(&blocks, local);
        let inner = local - blocks[j];
        if inner < na {
            out.display[e] = g + inner;
            if a_roots.contains(&inner) {
                out.static_parent[e] = None;
            }
        } else {
            out.display[e] = g + na + bo[j] + (inner - na);
        }
    }
    out
}

/// Shift the right-hand displays (those at or above `g`) by `by`.
fn shift_right(q: &Augmentation, g: usize, by: usize) -> Augmentation {
    q.map_display(|d| if d >= g { d + by } else { d })
}

/// `□_i`: from `Γ ⊢ D⃗` to `Γ ⊢ o`, where `Γ_i = D⃗ → o`.
pub fn lift(q: &Augmentation, gamma: &[SimpleType], i: usize) -> Augmentation {
    let g = atoms(gamma);
    let offs = component_offsets(gamma);
    let gi = offs[i];
    let root_i = offs[i + 1] - 1;
    let mut out = Augmentation {
        display: vec![g, root_i],
        static_parent: vec![None, None],
        dyn_parent: vec![None, Some(0)],
    };
    for e in 0..q.len() {
        let d = q.display[e];
        let right = d >= g;
        out.display.push(if right { gi + (d - g) } else { d });
        out.static_parent.push(match q.static_parent[e] {
            Some(p) => Some(p + 2),
            None if right => Some(1),
            None => None,
        });
        out.dyn_parent.push(Some(q.dyn_parent[e].map_or(1, |p| p + 2)));
    }
    out
}

fn enc_term(scope: &mut Scope, t: &Term) -> Result<(Augmentation, SimpleType), EncodeError> {
    match t {
        Term::Abs(_, b, body) => {
            let gamma = scope.types();
            scope.push(b.clone());
            let inner = enc_term(scope, body);
            scope.pop();
            let (q, c) = inner?;
            let q = curry_aug(&q, &gamma, std::slice::from_ref(b), std::slice::from_ref(&c));
            Ok((q, SimpleType::arrow(b.clone(), c)))
        }
        Term::Var(head, args) => {
            let (i, ty) = scope.resolve(head).ok_or_else(|| EncodeError::IllTyped(format!("unbound {head:?}")))?;
            let doms: Vec<SimpleType> = ty.domains().into_iter().cloned().collect();
            if doms.len() != args.len() {
                return Err(EncodeError::IllTyped("arity".into()));
            }
            let q = enc_seq(scope, args, &doms)?;
            Ok((lift(&q, &scope.types(), i), SimpleType::Base))
        }
        Term::App(..) => Err(EncodeError::NotNormal),
    }
}

fn enc_bag(scope: &mut Scope, b: &Bag, ty: &SimpleType) -> Result<Augmentation, EncodeError> {
    let mut out = Augmentation::empty();
    for t in b.elems() {
        let (q, found) = enc_term(scope, t)?;
        if found != *ty {
            return Err(EncodeError::IllTyped(format!("expected {ty}, found {found}")));
        }
        out = Augmentation::disjoint_union(&out, &q);
    }
    Ok(out)
}

fn enc_seq(scope: &mut Scope, s: &Seq, doms: &[SimpleType]) -> Result<Augmentation, EncodeError> {
    let g = atoms(&scope.types());
    let offs = component_offsets(doms);
    let mut out = Augmentation::empty();
    for (j, (b, d)) in s.items().iter().zip(doms).enumerate() {
        let q = enc_bag(scope, b, d)?;
        out = Augmentation::disjoint_union(&out, &shift_right(&q, g, offs[j]));
    }
    Ok(out)
}

/// Encoding of a normal term on `⟦Γ⟧ ⊢ ⟦A⟧`, with `A` its type.
pub fn encode_term(ctx: &Context, t: &Term) -> Result<(Isogmentation, SimpleType), EncodeError> {
    let (q, ty) = enc_term(&mut Scope::new(ctx.clone()), t)?;
    Ok((canonicalize(&q), ty))
}

pub fn encode_bag(ctx: &Context, b: &Bag, ty: &SimpleType) -> Result<Isogmentation, EncodeError> {
    Ok(canonicalize(&enc_bag(&mut Scope::new(ctx.clone()), b, ty)?))
}

pub fn encode_seq(ctx: &Context, s: &Seq, tys: &[SimpleType]) -> Result<Isogmentation, EncodeError> {
    if s.len() != tys.len() {
        return Err(EncodeError::IllTyped("sequence length".into()));
    }
    Ok(canonicalize(&enc_seq(&mut Scope::new(ctx.clone()), s, tys)?))
}

/// The raw (uncanonicalized) encoding, in a fixed event order.
pub fn encode_term_raw(ctx: &Context, t: &Term) -> Result<Augmentation, EncodeError> {
    Ok(enc_term(&mut Scope::new(ctx.clone()), t)?.0)
}

fn dec_term(scope: &mut Scope, q: &Augmentation, ty: &SimpleType) -> Result<Term, DecodeError> {
    match ty {
        SimpleType::Arrow(b, c) => {
            let gamma = scope.types();
            let q = uncurry_aug(q, &gamma, std::slice::from_ref(b), std::slice::from_ref(c));
            scope.push((**b).clone());
            let body = dec_term(scope, &q, c);
            scope.pop();
            let name = format!("x{}", scope.len());
            Ok(Term::Abs(Hint(name.as_str().into()), (**b).clone(), Box::new(body?)))
        }
        SimpleType::Base => {
            let gamma = scope.types();
            let g = atoms(&gamma);
            let offs = component_offsets(&gamma);
            let roots = q.dyn_roots();
            if roots.len() != 1 {
                return derr(format!("{} initial moves at base type", roots.len()));
            }
            let r = roots[0];
            if q.display[r] != g || q.static_parent[r].is_some() {
                return derr("initial move not at the result");
            }
            let kids: Vec<EventId> = (0..q.len()).filter(|&e| q.dyn_parent[e] == Some(r)).collect();
            if kids.len() != 1 {
                return derr("initial move without a unique answer");
            }
            let p = kids[0];
            let i = match (0..gamma.len()).find(|&i| offs[i + 1] - 1 == q.display[p]) {
                Some(i) => i,
                None => return derr("head move not at a context root"),
            };
            if q.static_parent[p].is_some() {
                return derr("head move has a static parent");
            }
            let gi = offs[i];
            let mut inner = Augmentation::empty();
            let mut index = vec![usize::MAX; q.len()];
            let mut k = 0;
            for e in 0..q.len() {
                if e != r && e != p {
                    index[e] = k;
                    k += 1;
                }
            }
            for e in 0..q.len() {
                if e == r || e == p {
                    continue;
                }
                let mut top = e;
                while let Some(s) = q.static_parent[top] {
                    top = s;
                }
                let d = q.display[e];
                let disp = if top == p {
                    if d < gi || d >= offs[i + 1] - 1 {
                        return derr("argument move outside the head's domain");
                    }
                    g + (d - gi)
                } else {
                    d
                };
                let sp = match q.static_parent[e] {
                    Some(s) if s == p => None,
                    Some(s) if s == r => return derr("move justified by the initial move"),
                    Some(s) => Some(index[s]),
                    None => None,
                };
                let dp = match q.dyn_parent[e] {
                    Some(s) if s == p => None,
                    Some(s) if s == r => return derr("second answer to the initial move"),
                    Some(s) => Some(index[s]),
                    None => return derr("stray initial move"),
                };
                inner.display.push(disp);
                inner.static_parent.push(sp);
                inner.dyn_parent.push(dp);
            }
            let doms: Vec<SimpleType> = gamma[i].domains().into_iter().cloned().collect();
            let s = dec_seq(scope, &inner, &doms)?;
            Ok(Term::Var(scope.head_at(i), s))
        }
    }
}

fn dec_seq(scope: &mut Scope, q: &Augmentation, doms: &[SimpleType]) -> Result<Seq, DecodeError> {
    let g = atoms(&scope.types());
    let offs = component_offsets(doms);
    let roots = dyn_root_of(q);
    let mut owner = vec![0; q.len()];
    for e in 0..q.len() {
        let rd = q.display[roots[e]];
        if rd < g {
            return derr("initial move on the left");
        }
        let j = component_of(&offs, rd - g);
        if j >= doms.len() || rd - g != offs[j + 1] - 1 {
            return derr("initial move not at a component root");
        }
        owner[e] = j;
    }
    let mut items = Vec::with_capacity(doms.len());
    for (j, d) in doms.iter().enumerate() {
        let keep: Vec<bool> = owner.iter().map(|&o| o == j).collect();
        let part = q.restrict(&keep);
        for &disp in &part.display {
            if disp >= g && !(offs[j] <= disp - g && disp - g < offs[j + 1]) {
                return derr("move displayed in another component");
            }
        }
        let part = part.map_display(|x| if x >= g { x - offs[j] } else { x });
        items.push(dec_bag(scope, &part, d)?);
    }
    Ok(Seq::new(items))
}

fn dec_bag(scope: &mut Scope, q: &Augmentation, ty: &SimpleType) -> Result<Bag, DecodeError> {
    let mut elems = Vec::new();
    for c in q.components() {
        elems.push(dec_term(scope, &c, ty)?);
    }
    Ok(Bag::new(elems))
}

pub fn decode_term(ctx: &Context, ty: &SimpleType, q: &Augmentation) -> Result<Term, DecodeError> {
    dec_term(&mut Scope::new(ctx.clone()), q, ty)
}

pub fn decode_bag(ctx: &Context, ty: &SimpleType, q: &Augmentation) -> Result<Bag, DecodeError> {
    dec_bag(&mut Scope::new(ctx.clone()), q, ty)
}

pub fn decode_seq(ctx: &Context, tys: &[SimpleType], q: &Augmentation) -> Result<Seq, DecodeError> {
    dec_seq(&mut Scope::new(ctx.clone()), q, tys)
}

fn terms_at(scope: &mut Scope, ty: &SimpleType, budget: usize) -> Vec<(Term, usize)> {
    if budget == 0 {
        return Vec::new();
    }
    match ty {
        SimpleType::Arrow(b, c) => {
            scope.push((**b).clone());
            let bodies = terms_at(scope, c, budget - 1);
            scope.pop();
            let name = format!("x{}", scope.len());
            bodies
                .into_iter()
                .map(|(t, s)| (Term::Abs(Hint(name.as_str().into()), (**b).clone(), Box::new(t)), s + 1))
                .collect()
        }
        SimpleType::Base => {
            let mut out = Vec::new();
            for i in 0..scope.len() {
                let doms: Vec<SimpleType> = scope.type_at(i).domains().into_iter().cloned().collect();
                let mut seqs: Vec<(Vec<Bag>, usize)> = vec![(Vec::new(), 0)];
                for d in &doms {
                    let elems = terms_at(scope, d, budget - 1);
                    let bags = multisets(&elems, budget - 1);
                    let mut next = Vec::new();
                    for (prefix, used) in &seqs {
                        for (b, s) in &bags {
                            if used + s < budget {
                                let mut p = prefix.clone();
                                p.push(Bag::new(b.clone()));
                                next.push((p, used + s));
                            }
                        }
                    }
                    seqs = next;
                }
                let head = scope.head_at(i);
                for (bags, s) in seqs {
                    out.push((Term::Var(head.clone(), Seq::new(bags)), s + 1));
                }
            }
            out
        }
    }
}

/// Every normal term of type `ty` in `ctx` of size at most `max_size`.
pub fn enumerate_normal_terms(ctx: &Context, ty: &SimpleType, max_size: usize) -> Vec<Term> {
    terms_at(&mut Scope::new(ctx.clone()), ty, max_size).into_iter().map(|(t, _)| t).collect()
}

/// Node of `⟦Γ⟧ ⊢ ⟦A⟧` at which the initial move of a term encoding sits.
pub fn result_root(gamma: &[SimpleType], ty: &SimpleType) -> NodeId {
    atoms(gamma) + ty.atoms() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{interpret_context, interpret_type, Arena};
    use crate::syntax::{parse_context, parse_term, parse_type};

    fn hom(ctx: &Context, ty: &SimpleType) -> Arena {
        Arena::hom(&interpret_context(ctx), &interpret_type(ty))
    }

    #[test]
    fn identity_has_two_events() {
        let t = parse_term(r"\x:o. x").unwrap();
        let (iso, ty) = encode_term(&Context::new(), &t).unwrap();
        let q = &iso.representative;
        assert_eq!(q.len(), 2);
        q.validate(&hom(&Context::new(), &ty)).unwrap();
        assert_eq!(q.static_parent, q.dyn_parent);
    }

    #[test]
    fn running_example_round_trip() {
        let t = parse_term(r"\f:((o->o)->(o->o)->o). f [\x:o.x, \x:o.x] [\y:o. f [] []]").unwrap();
        let (iso, ty) = encode_term(&Context::new(), &t).unwrap();
        assert_eq!(iso.representative.len(), 8);
        iso.representative.validate(&hom(&Context::new(), &ty)).unwrap();
        assert_eq!(decode_term(&Context::new(), &ty, &iso.representative).unwrap(), t);
    }

    #[test]
    fn empty_bag_is_empty() {
        let ctx = parse_context("x:o").unwrap();
        let iso = encode_bag(&ctx, &Bag::empty(), &parse_type("o->o").unwrap()).unwrap();
        assert!(iso.representative.is_empty());
        assert_eq!(decode_bag(&ctx, &SimpleType::Base, &Augmentation::empty()).unwrap(), Bag::empty());
    }

    #[test]
    fn curry_round_trip() {
        let ctx = parse_context("f:(o->o)->o->o, y:o").unwrap();
        let t = parse_term(r"f [\z:o. z, \z:o. y] [y, y]").unwrap();
        let raw = encode_term_raw(&ctx, &t).unwrap();
        let gamma = vec![parse_type("(o->o)->o->o").unwrap()];
        let a = vec![SimpleType::Base];
        let b = vec![SimpleType::Base];
        let c = curry_aug(&raw, &gamma, &a, &b);
        assert_eq!(uncurry_aug(&c, &gamma, &a, &b), raw);
    }

    #[test]
    fn small_enumeration_round_trips() {
        let ctx = parse_context("f:o->o->o, x:o").unwrap();
        let terms = enumerate_normal_terms(&ctx, &SimpleType::Base, 5);
        assert!(terms.len() > 10);
        let arena = hom(&ctx, &SimpleType::Base);
        for t in terms {
            let raw = encode_term_raw(&ctx, &t).unwrap();
            raw.validate(&arena).unwrap();
            assert_eq!(raw.len(), 2 * t.var_count());
            let (iso, _) = encode_term(&ctx, &t).unwrap();
            assert_eq!(decode_term(&ctx, &SimpleType::Base, &iso.representative).unwrap(), t);
        }
    }
}
