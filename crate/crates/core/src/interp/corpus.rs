//! Seeded random typed terms, biased toward duplicated variables and bags
//! of the wrong size.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Bag, Context, Head, SimpleType, Term};
use crate::typing::typecheck_term;

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub context: Context,
    pub term: Term,
    pub ty: SimpleType,
}

fn o() -> SimpleType {
    SimpleType::Base
}

fn oo() -> SimpleType {
    SimpleType::arrow(o(), o())
}

/// `o`, `o→o`, `(o→o)→o`, `o→o→o`.
pub fn small_types() -> Vec<SimpleType> {
    vec![o(), oo(), SimpleType::arrow(oo(), o()), SimpleType::arrow(o(), oo())]
}

struct Gen<'r> {
    rng: &'r mut ChaCha8Rng,
    env: Vec<(String, SimpleType)>,
    fresh: usize,
}

impl Gen<'_> {
    fn fresh(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    fn bag_size(&mut self) -> usize {
        *[0, 1, 1, 1, 2, 2, 3].choose(self.rng).unwrap()
    }

    fn bag(&mut self, ty: &SimpleType, budget: usize) -> Bag {
        let n = self.bag_size().min(budget);
        self.bag_of(ty, n, budget, 0.4)
    }

    fn bag_of(&mut self, ty: &SimpleType, n: usize, budget: usize, dup: f64) -> Bag {
        let mut elems: Vec<Term> = Vec::with_capacity(n);
        for _ in 0..n {
            if !elems.is_empty() && self.rng.gen_bool(dup) {
                elems.push(elems[0].clone());
            } else {
                let share = (budget / n.max(1)).max(1);
                elems.push(self.term(ty, share));
            }
        }
        Bag::new(elems)
    }

    fn redex(&mut self, ty: &SimpleType, budget: usize) -> Term {
        let d = if self.rng.gen_bool(0.75) { o() } else { oo() };
        let x = self.fresh();
        self.env.push((x.clone(), d.clone()));
        let body = self.term(ty, budget.saturating_sub(2).max(1));
        self.env.pop();
        let uses = occurrences(&body, &x);
        let arg = if self.rng.gen_bool(0.65) {
            self.bag_of(&d, uses, budget / 3 + 1, 0.8)
        } else {
            self.bag(&d, budget / 3 + 1)
        };
        Term::app(Term::lam(&x, d, body), arg)
    }

    fn term(&mut self, ty: &SimpleType, budget: usize) -> Term {
        if let SimpleType::Arrow(d, c) = ty {
            if budget > 4 && self.rng.gen_bool(0.2) {
                return self.redex(ty, budget);
            }
            let x = self.fresh();
            self.env.push((x.clone(), (**d).clone()));
            let body = self.term(c, budget.saturating_sub(1).max(1));
            self.env.pop();
            return Term::lam(&x, (**d).clone(), body);
        }
        if budget > 4 && self.rng.gen_bool(0.3) {
            return self.redex(ty, budget);
        }
        // recent binders first, so bound variables get reused
        let mut heads: Vec<(String, SimpleType)> = self.env.iter().rev().take(3).cloned().collect();
        heads.extend(self.env.iter().cloned());
        if let Some(last) = self.env.last() {
            heads.extend(std::iter::repeat_n(last.clone(), 3));
        }
        let affordable: Vec<&(String, SimpleType)> =
            heads.iter().filter(|(_, t)| budget > 2 * t.arity() || t.arity() == 0).collect();
        let Some((name, hty)) = affordable.choose(self.rng).map(|h| (*h).clone()) else {
            return self.redex(ty, budget.max(5));
        };
        let doms: Vec<SimpleType> = hty.domains().into_iter().cloned().collect();
        let per = budget.saturating_sub(1) / doms.len().max(1);
        let args = doms.iter().map(|d| self.bag(d, per)).collect();
        Term::apply_var(&name, args)
    }
}

fn occurrences(t: &Term, x: &str) -> usize {
    match t {
        Term::Var(h, args) => {
            let own = usize::from(matches!(h, Head::Free(n) if &**n == x));
            own + args.items().iter().flat_map(Bag::elems).map(|u| occurrences(u, x)).sum::<usize>()
        }
        Term::Abs(_, _, body) => occurrences(body, x),
        Term::App(f, b) => occurrences(f, x) + b.elems().iter().map(|u| occurrences(u, x)).sum::<usize>(),
    }
}

fn random_context(rng: &mut ChaCha8Rng) -> Context {
    let pool = [
        ("y", o()),
        ("z", o()),
        ("g", oo()),
        ("f", SimpleType::arrow(o(), oo())),
        ("h", SimpleType::arrow(oo(), o())),
    ];
    let mut ctx = Context::new();
    ctx.push("y", o()).unwrap();
    for (n, t) in &pool[1..] {
        if rng.gen_bool(0.6) {
            ctx.push(n, t.clone()).unwrap();
        }
    }
    ctx
}

/// `n` typed terms of size at most `max_size`, reproducible from `seed`.
pub fn generate_corpus(n: usize, seed: u64, max_size: usize) -> Vec<CorpusItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let types = small_types();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let context = random_context(&mut rng);
        let ty = if rng.gen_bool(0.6) { o() } else { types.choose(&mut rng).unwrap().clone() };
        let budget = rng.gen_range(3..=max_size);
        let env = context.bindings().iter().map(|(n, t)| (n.to_string(), t.clone())).collect();
        let mut g = Gen { rng: &mut rng, env, fresh: 0 };
        let term = g.term(&ty, budget);
        if term.size() > max_size || term.is_normal() {
            continue;
        }
        debug_assert_eq!(typecheck_term(&context, &term).as_ref(), Ok(&ty));
        out.push(CorpusItem { context, term, ty });
    }
    out
}

/// `s` typed in `Γ, x:B`, and a bag of type `B` in `Γ`.
#[derive(Clone, Debug)]
pub struct SubstInstance {
    pub context: Context,
    pub var: String,
    pub var_ty: SimpleType,
    pub body: Term,
    pub body_ty: SimpleType,
    pub bag: Bag,
}

impl SubstInstance {
    /// `Γ, x:B`.
    pub fn extended_context(&self) -> Context {
        self.context.clone().with(&self.var, self.var_ty.clone())
    }
}

pub fn generate_substitutions(n: usize, seed: u64, max_size: usize) -> Vec<SubstInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let types = small_types();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let context = random_context(&mut rng);
        let var = "x".to_string();
        let var_ty = if rng.gen_bool(0.7) { o() } else { oo() };
        let body_ty = if rng.gen_bool(0.6) { o() } else { types.choose(&mut rng).unwrap().clone() };
        let mut env: Vec<(String, SimpleType)> = context.bindings().iter().map(|(n, t)| (n.to_string(), t.clone())).collect();
        env.push((var.clone(), var_ty.clone()));
        let budget = rng.gen_range(2..=max_size);
        let mut g = Gen { rng: &mut rng, env, fresh: 0 };
        let body = g.term(&body_ty, budget);
        g.env.pop();
        let uses = occurrences(&body, &var);
        let bag = if g.rng.gen_bool(0.7) { g.bag_of(&var_ty, uses, max_size / 3, 0.6) } else { g.bag(&var_ty, max_size / 3) };
        if body.size() > max_size || bag.size() > max_size {
            continue;
        }
        out.push(SubstInstance { context, var, var_ty, body, body_ty, bag });
    }
    out
}
