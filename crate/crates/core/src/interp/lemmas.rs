//! Bag lemmas of resource categories, instantiated on interpreted terms.

use crate::correspondence::enumerate_normal_terms;
use crate::strategy::laws::Law;
use crate::strategy::{evaluate, Demand, Expr, Kernel, Strategy};
use crate::syntax::{Context, SimpleType, Term};

use super::{extend_with, interpret_term, pair, product};

fn fins(fs: &[Strategy]) -> Vec<Expr> {
    fs.iter().cloned().map(Expr::fin).collect()
}

/// Ordered splits `f̄ ◁ f̄1 * f̄2`, one per subset of indices.
fn splits<T: Clone>(xs: &[T]) -> Vec<(Vec<T>, Vec<T>)> {
    (0..1u32 << xs.len())
        .map(|mask| {
            let (mut l, mut r) = (Vec::new(), Vec::new());
            for (i, x) in xs.iter().enumerate() {
                if mask >> i & 1 == 1 { l.push(x.clone()) } else { r.push(x.clone()) }
            }
            (l, r)
        })
        .collect()
}

fn sum_all(parts: Vec<Expr>) -> Expr {
    parts.into_iter().reduce(Expr::sum).expect("empty sum")
}

fn zero_of(e: &Expr) -> Expr {
    Expr::fin(Strategy::zero(e.interface()))
}

/// Interpretations of normal terms of type `b` in `x:a`, smallest first.
pub fn sample_morphisms(a: &SimpleType, b: &SimpleType, max_size: usize, count: usize) -> Vec<(Term, Strategy)> {
    let ctx = Context::new().with("x", a.clone());
    let mut ts = enumerate_normal_terms(&ctx, b, max_size);
    ts.sort_by_key(|t| (t.size(), t.clone()));
    ts.into_iter()
        .take(count)
        .map(|t| {
            let s = interpret_term(&ctx, &t).expect("enumerated terms are typed");
            (t, s)
        })
        .collect()
}

/// `f ∘ id•_A = f`.
pub fn is_copointed(f: &Strategy) -> bool {
    let left = f.interface().left.clone();
    let e = Expr::comp(Expr::fin(f.clone()), Expr::ker(Kernel::pointed_id(&left)));
    evaluate(&e, &Demand::default()).is_ok_and(|s| s == *f)
}

fn bags(fs: &[Strategy]) -> Vec<Vec<Strategy>> {
    let mut out = vec![vec![]];
    if let Some(f) = fs.first() {
        out.push(vec![f.clone()]);
        out.push(vec![f.clone(), f.clone()]);
    }
    if fs.len() >= 2 {
        out.push(vec![fs[0].clone(), fs[1].clone()]);
    }
    if fs.len() >= 3 {
        out.push(vec![fs[0].clone(), fs[1].clone(), fs[2].clone()]);
    }
    out
}

/// Compatibility of bags of pointed morphisms with `δ`, of co-pointed ones
/// with `μ`, the counit and unit clauses, and the pickone lemma, for
/// morphisms `⟦a⟧ ⊢ ⟦b⟧` drawn from interpreted normal terms.
pub fn bag_laws(a: &SimpleType, b: &SimpleType) -> Vec<Law> {
    let la = [a.clone()];
    let lb = [b.clone()];
    let sample = sample_morphisms(a, b, 5, 6);
    let pointed: Vec<Strategy> = sample.iter().map(|(_, s)| s.clone()).collect();
    let copointed: Vec<Strategy> = pointed.iter().filter(|s| is_copointed(s)).cloned().collect();
    let mut out = Vec::new();
    for (n, bag) in bags(&pointed).into_iter().enumerate() {
        let pi = || product(&la, b, fins(&bag));
        let lhs = Expr::comp(Expr::ker(Kernel::delta(&lb, 2)), pi());
        let rhs = sum_all(
            splits(&bag)
                .into_iter()
                .map(|(l, r)| {
                    let t = Expr::tensor(product(&la, b, fins(&l)), product(&la, b, fins(&r)));
                    Expr::comp(t, Expr::ker(Kernel::delta(&la, 2)))
                })
                .collect(),
        );
        out.push(Law { name: format!("delta . Pi f (bag {n})"), lhs, rhs });
        let lhs = Expr::comp(Expr::ker(Kernel::eps(&lb)), pi());
        let rhs = if bag.is_empty() { Expr::ker(Kernel::eps(&la)) } else { zero_of(&lhs) };
        out.push(Law { name: format!("eps . Pi f (bag {n})"), lhs, rhs });
        let lhs = Expr::comp(Expr::ker(Kernel::pointed_id(&lb)), pi());
        let rhs = match bag.as_slice() {
            [v] => Expr::fin(v.clone()),
            _ => zero_of(&lhs),
        };
        out.push(Law { name: format!("pickone (bag {n})"), lhs, rhs });
    }
    for (n, bag) in bags(&copointed).into_iter().enumerate() {
        let pi = || product(&la, b, fins(&bag));
        let lhs = Expr::comp(pi(), Expr::ker(Kernel::mu(&la, 2)));
        let rhs = sum_all(
            splits(&bag)
                .into_iter()
                .map(|(l, r)| {
                    let t = Expr::tensor(product(&la, b, fins(&l)), product(&la, b, fins(&r)));
                    Expr::comp(Expr::ker(Kernel::mu(&lb, 2)), t)
                })
                .collect(),
        );
        out.push(Law { name: format!("Pi f . mu (co-pointed bag {n})"), lhs, rhs });
        let lhs = Expr::comp(pi(), Expr::ker(Kernel::eta(&la)));
        let rhs = if bag.is_empty() { Expr::ker(Kernel::eta(&lb)) } else { zero_of(&lhs) };
        out.push(Law { name: format!("Pi f . eta (co-pointed bag {n})"), lhs, rhs });
    }
    out
}

/// Distribution of `⟨id_Γ, Π b̄⟩` over pairings and products, for `f`, `g`
/// on `Γ ⊗ A ⊢ B` and `b̄` on `Γ ⊢ A`, all interpreted terms.
pub fn pairing_laws(gamma: &Context, a: &SimpleType, f: &Term, g: &Term, bag: &[Term]) -> Vec<Law> {
    let ext = gamma.clone().with("x", a.clone());
    let gt = gamma.types();
    let et = ext.types();
    let sf = interpret_term(&ext, f).expect("f is typed");
    let sg = interpret_term(&ext, g).expect("g is typed");
    let sb: Vec<Strategy> = bag.iter().map(|t| interpret_term(gamma, t).expect("bag is typed")).collect();
    let bty = sf.interface().right[0].clone();
    let cty = sg.interface().right[0].clone();
    let sub = |h: &Strategy, part: &[Strategy]| Expr::comp(Expr::fin(h.clone()), extend_with(&gt, a, &part.to_vec()));
    let mut out = Vec::new();
    let lhs = Expr::comp(pair(&et, Expr::fin(sf.clone()), Expr::fin(sg.clone())), extend_with(&gt, a, &sb));
    let rhs = sum_all(splits(&sb).into_iter().map(|(l, r)| pair(&gt, sub(&sf, &l), sub(&sg, &r))).collect());
    out.push(Law { name: "<f, g> . <id, Pi b>".into(), lhs, rhs });
    if bty == cty {
        let star = |x: Expr, y: Expr, ctx: &[SimpleType]| {
            Expr::comp(Expr::ker(Kernel::mu(std::slice::from_ref(&bty), 2)), pair(ctx, x, y))
        };
        let lhs = Expr::comp(star(Expr::fin(sf.clone()), Expr::fin(sg.clone()), &et), extend_with(&gt, a, &sb));
        let rhs = sum_all(splits(&sb).into_iter().map(|(l, r)| star(sub(&sf, &l), sub(&sg, &r), &gt)).collect());
        out.push(Law { name: "(f * g) . <id, Pi b>".into(), lhs, rhs });
    }
    let one = Expr::comp(Expr::ker(Kernel::eta(std::slice::from_ref(&bty))), Expr::ker(Kernel::eps(&et)));
    let lhs = Expr::comp(one, extend_with(&gt, a, &sb));
    let unit = Expr::comp(Expr::ker(Kernel::eta(std::slice::from_ref(&bty))), Expr::ker(Kernel::eps(&gt)));
    let rhs = if sb.is_empty() { unit } else { zero_of(&lhs) };
    out.push(Law { name: "1 . <id, Pi b>".into(), lhs, rhs });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::laws::check_laws;
    use crate::syntax::{parse_context, parse_term, parse_type};

    #[test]
    fn bag_laws_on_base_objects() {
        let o = SimpleType::Base;
        let laws = bag_laws(&o, &parse_type("(o->o)->o").unwrap());
        assert!(laws.iter().any(|l| l.name.starts_with("Pi f . mu")));
        for r in check_laws(&laws, 4) {
            assert!(r.passed, "{}: {:?}", r.name, r.detail);
        }
    }

    #[test]
    fn pairings_distribute() {
        let ctx = parse_context("y:o, g:o->o").unwrap();
        let f = parse_term(r"g[x]").unwrap();
        let g = parse_term(r"g[x, y]").unwrap();
        for bag in [vec![], vec!["y"], vec!["y", "g[y]"], vec!["y", "y", "g[]"]] {
            let bag: Vec<Term> = bag.into_iter().map(|s| parse_term(s).unwrap()).collect();
            for r in check_laws(&pairing_laws(&ctx, &SimpleType::Base, &f, &g, &bag), 3) {
                assert!(r.passed, "{}: {:?}", r.name, r.detail);
            }
        }
    }
}
