//! Terms as strategies.
//!
//! A term in context `Γ` of type `A` denotes a finite pointed strategy on
//! `⟦Γ⟧ ⊢ ⟦A⟧`. Bags and sequences stay at the meta level, as lists of such
//! strategies.

mod corpus;
mod lemmas;
mod report;

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use thiserror::Error;

use crate::arena::Arena;
use crate::causal::{Configuration, PosKey};
use crate::strategy::{evaluate, Coeff, Demand, Expr, Interface, Kernel, Strategy, WindowTooSmall};
use crate::syntax::{Bag, Context, Scope, Seq, SimpleType, Term, TermSum};
use crate::typing::{self, TypeError};

pub use corpus::{generate_corpus, generate_substitutions, small_types, CorpusItem, SubstInstance};
pub use lemmas::{bag_laws, is_copointed, pairing_laws, sample_morphisms};
pub use report::{
    check_invariance, check_normal_form_correspondence, check_substitution, compare, encode_sum, soundness,
    CorrespondenceReport, InvarianceReport, Mismatch, SoundnessReport, SubstitutionReport,
};

pub type SemTerm = Strategy;
pub type SemBag = Vec<Strategy>;
pub type SemSeq = Vec<SemBag>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] WindowTooSmall),
}

fn run(e: &Expr) -> Result<Strategy, InterpError> {
    Ok(evaluate(e, &Demand::default())?)
}

/// `⟨f1, …, fn⟩ = (f1 ⊗ … ⊗ fn) ∘ δ^n`, with `ε` for `n = 0`.
pub fn tuple(gamma: &[SimpleType], fs: Vec<Expr>) -> Expr {
    let n = fs.len();
    let mut it = fs.into_iter();
    let Some(first) = it.next() else {
        return Expr::ker(Kernel::eps(gamma));
    };
    let t = it.fold(first, Expr::tensor);
    Expr::comp(t, Expr::ker(Kernel::delta(gamma, n)))
}

pub fn pair(gamma: &[SimpleType], f: Expr, g: Expr) -> Expr {
    tuple(gamma, vec![f, g])
}

/// `Π[f1, …, fn] = μ^n ∘ ⟨f1, …, fn⟩`; the empty bag gives `1 = η ∘ ε`.
pub fn product(gamma: &[SimpleType], ty: &SimpleType, fs: Vec<Expr>) -> Expr {
    let ts = [ty.clone()];
    match fs.len() {
        0 => Expr::comp(Expr::ker(Kernel::eta(&ts)), Expr::ker(Kernel::eps(gamma))),
        1 => fs.into_iter().next().unwrap(),
        n => Expr::comp(Expr::ker(Kernel::mu(&ts, n)), tuple(gamma, fs)),
    }
}

/// `⟨| b1, …, bk |⟩ = ⟨Π b1, …, Π bk⟩`.
pub fn pack(gamma: &[SimpleType], doms: &[SimpleType], seq: &SemSeq) -> Expr {
    let parts = seq
        .iter()
        .zip(doms)
        .map(|(bag, d)| product(gamma, d, bag.iter().cloned().map(Expr::fin).collect()))
        .collect();
    tuple(gamma, parts)
}

/// `ev = Λ⁻¹(id)` on `(D⃗ → c) ⊗ D⃗ ⊢ c`.
pub fn ev(doms: &[SimpleType], c: &SimpleType) -> Expr {
    let a = doms.iter().rev().fold(c.clone(), |acc, d| SimpleType::arrow(d.clone(), acc));
    Expr::uncurry(doms.len(), Expr::ker(Kernel::id(&[a])))
}

/// Positions of `D⃗ → o` made of one initial move over a position of `⊗D⃗`.
fn pointed_over(domain: &Arena, ws: &BTreeSet<PosKey>) -> BTreeSet<PosKey> {
    let root = domain.len();
    ws.iter()
        .map(|w| {
            let w = w.representative();
            let n = w.len();
            let mut display = w.display.clone();
            display.push(root);
            let parent = w.parent.iter().map(|p| Some(p.unwrap_or(n))).collect::<Vec<_>>();
            let mut parent = parent;
            parent.push(None);
            PosKey::of(&Configuration { display, parent })
        })
        .collect()
}

fn interp_term(scope: &mut Scope, t: &Term) -> Result<SemTerm, InterpError> {
    let gamma = scope.types();
    match t {
        Term::Abs(_, a, body) => {
            scope.push(a.clone());
            let s = interp_term(scope, body);
            scope.pop();
            Ok(s?.curry(1))
        }
        Term::Var(head, args) => {
            let (i, ty) = scope.resolve(head).ok_or_else(|| TypeError::UnboundVariable(format!("{head:?}")))?;
            let ty = ty.clone();
            let doms: Vec<SimpleType> = ty.domains().into_iter().cloned().collect();
            let seq = interp_seq_in(scope, args, &doms)?;
            let p = run(&pack(&gamma, &doms, &seq))?;
            let z = pointed_over(&p.interface().right_arena, &p.right_positions());
            let var = Expr::comp(Expr::ker(Kernel::pointed_id(std::slice::from_ref(&ty))), Expr::ker(Kernel::proj(&gamma, i)));
            let v = evaluate(&var, &Demand { left: None, right: Some(z) })?;
            run(&Expr::comp(ev(&doms, &SimpleType::Base), pair(&gamma, Expr::fin(v), Expr::fin(p))))
        }
        Term::App(f, b) => {
            let fty = typing::synth_term(scope, f)?;
            let SimpleType::Arrow(d, c) = &fty else {
                return Err(TypeError::NotAFunction.into());
            };
            let sf = interp_term(scope, f)?;
            let sb = interp_bag_in(scope, b, d)?;
            let arg = product(&gamma, d, sb.into_iter().map(Expr::fin).collect());
            run(&Expr::comp(ev(std::slice::from_ref(&**d), c), pair(&gamma, Expr::fin(sf), arg)))
        }
    }
}

fn interp_bag_in(scope: &mut Scope, b: &Bag, _ty: &SimpleType) -> Result<SemBag, InterpError> {
    b.elems().iter().map(|t| interp_term(scope, t)).collect()
}

fn interp_seq_in(scope: &mut Scope, s: &Seq, doms: &[SimpleType]) -> Result<SemSeq, InterpError> {
    s.items().iter().zip(doms).map(|(b, d)| interp_bag_in(scope, b, d)).collect()
}

pub fn interpret_term(ctx: &Context, t: &Term) -> Result<SemTerm, InterpError> {
    typing::typecheck_term(ctx, t)?;
    interp_term(&mut Scope::new(ctx.clone()), t)
}

pub fn interpret_bag(ctx: &Context, b: &Bag, ty: &SimpleType) -> Result<SemBag, InterpError> {
    typing::typecheck_bag(ctx, b, Some(ty))?;
    interp_bag_in(&mut Scope::new(ctx.clone()), b, ty)
}

pub fn interpret_seq(ctx: &Context, s: &Seq, doms: &[SimpleType]) -> Result<SemSeq, InterpError> {
    typing::typecheck_seq(ctx, s, Some(doms))?;
    interp_seq_in(&mut Scope::new(ctx.clone()), s, doms)
}

pub fn nat_coeff(n: &BigUint) -> Coeff {
    Coeff::Fin(BigRational::from_integer(BigInt::from(n.clone())))
}

/// `Σ c · ⟦t⟧`, on `⟦Γ⟧ ⊢ ⟦ty⟧`.
pub fn interpret_sum(ctx: &Context, s: &TermSum, ty: &SimpleType) -> Result<Strategy, InterpError> {
    let mut out = Strategy::zero(Interface::new(ctx.types(), vec![ty.clone()]));
    for (t, c) in s.iter() {
        out = out.add(&interpret_term(ctx, t)?.scale(&nat_coeff(c)));
    }
    Ok(out)
}

/// `id• ∘ σ = σ`.
pub fn is_pointed_morphism(s: &Strategy) -> Result<bool, InterpError> {
    let right = s.interface().right.clone();
    let lhs = run(&Expr::comp(Expr::ker(Kernel::pointed_id(&right)), Expr::fin(s.clone())))?;
    Ok(lhs == *s)
}

fn split_last(s: &Strategy) -> (Vec<SimpleType>, SimpleType) {
    let mut g = s.interface().left.clone();
    let b = g.pop().expect("substituting into a closed strategy");
    (g, b)
}

/// `⟨id_Γ, Π g⟩`, on `⟦Γ⟧ ⊢ ⟦Γ⟧ ⊗ ⟦B⟧`.
pub fn extend_with(gamma: &[SimpleType], b: &SimpleType, g: &SemBag) -> Expr {
    let bag = product(gamma, b, g.iter().cloned().map(Expr::fin).collect());
    pair(gamma, Expr::ker(Kernel::id(gamma)), bag)
}

/// `f ∘ ⟨id_Γ, Π g⟩` for `f` on `Γ ⊗ B ⊢ A` and `g` a bag on `Γ ⊢ B`.
pub fn semantic_substitute(f: &SemTerm, g: &SemBag) -> Result<Strategy, InterpError> {
    let (gamma, b) = split_last(f);
    run(&Expr::comp(Expr::fin(f.clone()), extend_with(&gamma, &b, g)))
}

/// Bag variant: `Π c ∘ ⟨id_Γ, Π g⟩`, with `c` on `Γ ⊗ B ⊢ A`.
pub fn semantic_substitute_bag(
    gamma: &[SimpleType],
    b: &SimpleType,
    a: &SimpleType,
    c: &SemBag,
    g: &SemBag,
) -> Result<Strategy, InterpError> {
    let mut gb = gamma.to_vec();
    gb.push(b.clone());
    let outer = product(&gb, a, c.iter().cloned().map(Expr::fin).collect());
    run(&Expr::comp(outer, extend_with(gamma, b, g)))
}

/// Sequence variant: `⟨| c⃗ |⟩ ∘ ⟨id_Γ, Π g⟩`.
pub fn semantic_substitute_seq(
    gamma: &[SimpleType],
    b: &SimpleType,
    doms: &[SimpleType],
    c: &SemSeq,
    g: &SemBag,
) -> Result<Strategy, InterpError> {
    let mut gb = gamma.to_vec();
    gb.push(b.clone());
    run(&Expr::comp(pack(&gb, doms, c), extend_with(gamma, b, g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::encode_term;
    use crate::rewrite::normalize_term;
    use crate::syntax::{parse_context, parse_term};

    fn encoded(ctx: &Context, t: &Term) -> Strategy {
        let (iso, ty) = encode_term(ctx, t).unwrap();
        Strategy::from_entries(Interface::new(ctx.types(), vec![ty]), [(iso.key, Coeff::one())])
    }

    #[test]
    fn normal_terms_denote_their_encoding() {
        let ctx = parse_context("f:o->o->o, x:o, h:(o->o)->o").unwrap();
        for src in [r"x", r"f[x][x]", r"f[x,x][]", r"\y:o. f[y][x,y]", r"h[\u:o. f[u][x]]", r"h[\u:o. u, \u:o. x]"] {
            let t = parse_term(src).unwrap();
            assert_eq!(interpret_term(&ctx, &t).unwrap(), encoded(&ctx, &t), "{src}");
        }
    }

    #[test]
    fn duplicating_redex() {
        let ctx = parse_context("f:o->o->o, y:o, z:o").unwrap();
        let t = parse_term(r"(\x:o. f[x][x])[y, z]").unwrap();
        let s = interpret_term(&ctx, &t).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|(_, c)| c.is_one()));
        let nf = normalize_term(&t).unwrap();
        assert_eq!(s, encode_sum(&ctx, &nf, &SimpleType::Base).unwrap());
    }

    #[test]
    fn identity_redex() {
        let ctx = parse_context("y:o").unwrap();
        let t = parse_term(r"(\x:o. x)[y]").unwrap();
        assert_eq!(interpret_term(&ctx, &t).unwrap(), interpret_term(&ctx, &parse_term("y").unwrap()).unwrap());
    }

    #[test]
    fn wrong_bag_size_vanishes() {
        let ctx = parse_context("y:o").unwrap();
        for src in [r"(\x:o. x)[]", r"(\x:o. x)[y, y]", r"(\x:o. y)[y]"] {
            assert!(interpret_term(&ctx, &parse_term(src).unwrap()).unwrap().is_zero(), "{src}");
        }
        let s = interpret_term(&ctx, &parse_term(r"(\x:o. y)[]").unwrap()).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn interpretations_are_pointed() {
        let ctx = parse_context("f:o->o->o, y:o, z:o").unwrap();
        let t = parse_term(r"(\x:o. f[x][x])[y, z]").unwrap();
        assert!(is_pointed_morphism(&interpret_term(&ctx, &t).unwrap()).unwrap());
    }

    #[test]
    fn substitution_of_unused_variable() {
        let ctx = parse_context("y:o, x:o").unwrap();
        let s = interpret_term(&ctx, &parse_term("y").unwrap()).unwrap();
        let base = parse_context("y:o").unwrap();
        assert_eq!(semantic_substitute(&s, &vec![]).unwrap(), interpret_term(&base, &parse_term("y").unwrap()).unwrap());
        let y = interpret_term(&base, &parse_term("y").unwrap()).unwrap();
        assert!(semantic_substitute(&s, &vec![y]).unwrap().is_zero());
    }
}
