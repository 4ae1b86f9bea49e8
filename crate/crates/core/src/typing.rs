//! Bidirectional typing for η-long resource terms.
//!
//! Terms synthesize their type; bags and sequences are checked against an
//! expected type when one is available, which is the only way an empty bag
//! gets a type.

use thiserror::Error;

use crate::syntax::{Bag, Context, Head, Scope, Seq, SimpleType, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{var}` expects {expected} argument bags, got {found}")]
    ArityMismatch { var: String, expected: usize, found: usize },
    #[error("expected type {expected}, found {found}")]
    DomainMismatch { expected: SimpleType, found: SimpleType },
    #[error("variable `{0}` of arrow type is not fully applied")]
    NotEtaLong(String),
    #[error("bag mixes elements of types {0} and {1}")]
    HeterogeneousBag(SimpleType, SimpleType),
    #[error("applying a term of base type")]
    NotAFunction,
    #[error("cannot synthesize a type for the empty bag")]
    EmptyBag,
}

fn head_name(h: &Head) -> String {
    match h {
        Head::Free(n) => n.to_string(),
        Head::Bound(i) => format!("#{i}"),
    }
}

pub(crate) fn synth_term(scope: &mut Scope, t: &Term) -> Result<SimpleType, TypeError> {
    match t {
        Term::Var(head, args) => {
            let ty = scope
                .resolve(head)
                .map(|(_, ty)| ty.clone())
                .ok_or_else(|| TypeError::UnboundVariable(head_name(head)))?;
            let doms: Vec<SimpleType> = ty.domains().into_iter().cloned().collect();
            if args.len() != doms.len() {
                if args.is_empty() {
                    return Err(TypeError::NotEtaLong(head_name(head)));
                }
                return Err(TypeError::ArityMismatch {
                    var: head_name(head),
                    expected: doms.len(),
                    found: args.len(),
                });
            }
            for (b, d) in args.items().iter().zip(&doms) {
                check_bag(scope, b, d)?;
            }
            Ok(SimpleType::Base)
        }
        Term::Abs(_, ty, body) => {
            scope.push(ty.clone());
            let cod = synth_term(scope, body);
            scope.pop();
            Ok(SimpleType::arrow(ty.clone(), cod?))
        }
        Term::App(f, b) => match synth_term(scope, f)? {
            SimpleType::Arrow(a, c) => {
                check_bag(scope, b, &a)?;
                Ok(*c)
            }
            SimpleType::Base => Err(TypeError::NotAFunction),
        },
    }
}

fn synth_bag(scope: &mut Scope, b: &Bag) -> Result<Option<SimpleType>, TypeError> {
    let mut found: Option<SimpleType> = None;
    for t in b.elems() {
        let ty = synth_term(scope, t)?;
        match &found {
            None => found = Some(ty),
            Some(prev) if *prev != ty => return Err(TypeError::HeterogeneousBag(prev.clone(), ty)),
            _ => {}
        }
    }
    Ok(found)
}

pub(crate) fn check_bag(scope: &mut Scope, b: &Bag, expected: &SimpleType) -> Result<(), TypeError> {
    match synth_bag(scope, b)? {
        None => Ok(()),
        Some(ty) if ty == *expected => Ok(()),
        Some(ty) => Err(TypeError::DomainMismatch { expected: expected.clone(), found: ty }),
    }
}

/// Γ ⊢ t : A.
pub fn typecheck_term(ctx: &Context, t: &Term) -> Result<SimpleType, TypeError> {
    synth_term(&mut Scope::new(ctx.clone()), t)
}

/// Γ ⊢ b̄ : A. With `expected` absent, the empty bag is rejected.
pub fn typecheck_bag(ctx: &Context, b: &Bag, expected: Option<&SimpleType>) -> Result<SimpleType, TypeError> {
    let mut scope = Scope::new(ctx.clone());
    match expected {
        Some(e) => check_bag(&mut scope, b, e).map(|_| e.clone()),
        None => synth_bag(&mut scope, b)?.ok_or(TypeError::EmptyBag),
    }
}

/// Γ ⊢ s : A⃗, item-wise.
pub fn typecheck_seq(ctx: &Context, s: &Seq, expected: Option<&[SimpleType]>) -> Result<Vec<SimpleType>, TypeError> {
    match expected {
        Some(tys) => {
            if tys.len() != s.len() {
                return Err(TypeError::ArityMismatch {
                    var: "<sequence>".into(),
                    expected: tys.len(),
                    found: s.len(),
                });
            }
            s.items()
                .iter()
                .zip(tys)
                .map(|(b, t)| typecheck_bag(ctx, b, Some(t)))
                .collect()
        }
        None => s.items().iter().map(|b| typecheck_bag(ctx, b, None)).collect(),
    }
}

/// Which of the three judgments a subject is checked under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Judgment {
    Tm(Term, SimpleType),
    Bg(Bag, SimpleType),
    Sq(Seq, Vec<SimpleType>),
}

pub fn derivable(ctx: &Context, j: &Judgment) -> bool {
    match j {
        Judgment::Tm(t, a) => typecheck_term(ctx, t).as_ref() == Ok(a),
        Judgment::Bg(b, a) => typecheck_bag(ctx, b, Some(a)).is_ok(),
        Judgment::Sq(s, a) => typecheck_seq(ctx, s, Some(a)).is_ok(),
    }
}

/// A typed term is normal iff it can be typed without the application rule.
pub fn is_normal(_ctx: &Context, t: &Term) -> bool {
    t.is_normal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_context, parse_term, parse_type};

    fn ty(s: &str) -> SimpleType {
        parse_type(s).unwrap()
    }

    #[test]
    fn identity_type() {
        let t = parse_term(r"\x:o. x").unwrap();
        assert_eq!(typecheck_term(&Context::new(), &t).unwrap(), ty("o->o"));
    }

    #[test]
    fn running_example_type() {
        let t = parse_term(r"\f:((o->o)->(o->o)->o). f [\x:o.x, \x:o.x] [\y:o. f [] []]").unwrap();
        assert_eq!(typecheck_term(&Context::new(), &t).unwrap(), ty("((o->o)->(o->o)->o)->o"));
    }

    #[test]
    fn bare_arrow_variable() {
        let ctx = parse_context("f:o->o").unwrap();
        assert_eq!(
            typecheck_term(&ctx, &parse_term("f").unwrap()),
            Err(TypeError::NotEtaLong("f".into()))
        );
    }

    #[test]
    fn arity_and_unbound() {
        let ctx = parse_context("f:o->o").unwrap();
        assert!(matches!(
            typecheck_term(&ctx, &parse_term("f [] []").unwrap()),
            Err(TypeError::ArityMismatch { .. })
        ));
        assert!(matches!(
            typecheck_term(&ctx, &parse_term("g").unwrap()),
            Err(TypeError::UnboundVariable(_))
        ));
    }

    #[test]
    fn bags() {
        let ctx = parse_context("x:o, f:o->o").unwrap();
        let b = match parse_term("g [x, x]").unwrap() {
            Term::Var(_, s) => s.items()[0].clone(),
            _ => unreachable!(),
        };
        assert_eq!(typecheck_bag(&ctx, &b, Some(&SimpleType::Base)), Ok(SimpleType::Base));
        let het = match parse_term(r"g [x, \y:o. y]").unwrap() {
            Term::Var(_, s) => s.items()[0].clone(),
            _ => unreachable!(),
        };
        assert!(matches!(typecheck_bag(&ctx, &het, None), Err(TypeError::HeterogeneousBag(..))));
        assert_eq!(typecheck_bag(&Context::new(), &Bag::empty(), Some(&ty("o->o"))), Ok(ty("o->o")));
    }

    #[test]
    fn application_domain() {
        let ctx = parse_context("y:o").unwrap();
        let t = parse_term(r"(\x:o->o. x [y]) [y]").unwrap();
        assert!(matches!(typecheck_term(&ctx, &t), Err(TypeError::DomainMismatch { .. })));
        let t = parse_term(r"(\x:o. x) [y]").unwrap();
        assert_eq!(typecheck_term(&ctx, &t), Ok(SimpleType::Base));
        assert!(!is_normal(&ctx, &t));
    }
}
